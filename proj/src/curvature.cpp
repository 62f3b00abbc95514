#include "qkq/curvature.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace qkq {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::SDE_Negative: return "SDE_Negative";
    case Verdict::ConformallyFlat: return "ConformallyFlat";
    case Verdict::Failed: return "Failed";
  }
  return "?";
}

std::string to_string(VanishingHalf v) {
  switch (v) {
    case VanishingHalf::None: return "none";
    case VanishingHalf::Plus: return "plus";
    case VanishingHalf::Minus: return "minus";
    case VanishingHalf::Both: return "both";
  }
  return "?";
}

Eigen::Matrix4d quotient_metric_at(const QuotientChart& c, const Eigen::Vector4d& xi, double* gVV) {
  SliceFrame f = slice_frame(c, xi);
  auto g = [&](const Tangent& a, const Tangent& b) { return ambient_metric_x(c.k, f.x.x, a, b); };
  const double vv = g(f.V, f.V);
  if (gVV) *gVV = vv;
  if (std::abs(vv) < 1e-8) throw Error(ErrorKind::NullOrbit, "|g(V,V)| < 1e-8");
  Eigen::Vector4d tv;
  for (int a = 0; a < 4; ++a) tv[a] = g(f.t[a], f.V);
  Eigen::Matrix4d G;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) G(a, b) = G(b, a) = g(f.t[a], f.t[b]) - tv[a] * tv[b] / vv;
  return G;
}

MetricSample quotient_metric(const QuotientChart& c, const Eigen::Vector4d& xi, double h) {
  for (int a = 0; a < 4; ++a)
    for (int s : {-1, 1}) {
      Eigen::Vector4d y = xi;
      y[a] += s * 10.0 * h;
      if (!in_domain(c, y)) throw Error(ErrorKind::Domain, "point within 10h of the slice boundary");
    }
  MetricSample m;
  m.xi = xi;
  m.h = h;
  m.G = quotient_metric_at(c, xi, &m.gVV);
  return m;
}

namespace {

using Gamma = std::array<Eigen::Matrix4d, 4>;  // Gamma[a](b,c)
using Tensor4 = std::array<std::array<Eigen::Matrix4d, 4>, 4>;  // R[a][b](c,d)

template <typename F, typename T>
T central4(F&& f, const Eigen::Vector4d& xi, int dir, double h) {
  Eigen::Vector4d e = Eigen::Vector4d::Unit(dir) * h;
  return (f(xi - 2 * e) - 8.0 * f(xi - e) + 8.0 * f(xi + e) - f(xi + 2 * e)) * (1.0 / (12.0 * h));
}

Gamma christoffel(const QuotientChart& c, const Eigen::Vector4d& xi, double h) {
  std::array<Eigen::Matrix4d, 4> dG;
  auto G = [&](const Eigen::Vector4d& y) { return quotient_metric_at(c, y); };
  for (int d = 0; d < 4; ++d) dG[d] = central4<decltype(G)&, Eigen::Matrix4d>(G, xi, d, h);
  const Eigen::Matrix4d Ginv = G(xi).inverse();
  Gamma out;
  for (int a = 0; a < 4; ++a) {
    out[a].setZero();
    for (int b = 0; b < 4; ++b)
      for (int cc = 0; cc < 4; ++cc)
        for (int d = 0; d < 4; ++d) out[a](b, cc) += 0.5 * Ginv(a, d) * (dG[b](d, cc) + dG[cc](d, b) - dG[d](b, cc));
  }
  return out;
}

Gamma gamma_axpy(const Gamma& x, double s, const Gamma& y) {
  Gamma r;
  for (int a = 0; a < 4; ++a) r[a] = x[a] + s * y[a];
  return r;
}

}  // namespace

CurvatureReport curvature_report(const QuotientChart& c, const Eigen::Vector4d& xi, double h, const Thresholds& th) {
  MetricSample ms = quotient_metric(c, xi, h);
  const Eigen::Matrix4d& G = ms.G;
  {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(G);
    const auto ev = es.eigenvalues().cwiseAbs();
    if (ev.maxCoeff() > 1e8 * ev.minCoeff()) throw Error(ErrorKind::IllConditioned, "metric condition number > 1e8");
  }
  const Gamma Gm = christoffel(c, xi, h);
  std::array<Gamma, 4> dGm;  // dGm[e][a](b,c) = d_e Gamma^a_bc
  for (int e = 0; e < 4; ++e) {
    Eigen::Vector4d s = Eigen::Vector4d::Unit(e) * h;
    Gamma m2 = christoffel(c, xi - 2 * s, h), m1 = christoffel(c, xi - s, h);
    Gamma p1 = christoffel(c, xi + s, h), p2 = christoffel(c, xi + 2 * s, h);
    for (int a = 0; a < 4; ++a) dGm[e][a] = (m2[a] - 8.0 * m1[a] + 8.0 * p1[a] - p2[a]) / (12.0 * h);
  }

  // R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb}
  Tensor4 Rup;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int cc = 0; cc < 4; ++cc)
        for (int d = 0; d < 4; ++d) {
          double v = dGm[cc][a](d, b) - dGm[d][a](cc, b);
          for (int e = 0; e < 4; ++e) v += Gm[a](cc, e) * Gm[e](d, b) - Gm[a](d, e) * Gm[e](cc, b);
          Rup[a][b](cc, d) = v;
        }
  Tensor4 R;  // all lower
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      R[a][b].setZero();
      for (int e = 0; e < 4; ++e) R[a][b] += G(a, e) * Rup[e][b];
    }
  Eigen::Matrix4d Ric = Eigen::Matrix4d::Zero();
  for (int b = 0; b < 4; ++b)
    for (int d = 0; d < 4; ++d)
      for (int a = 0; a < 4; ++a) Ric(b, d) += Rup[a][b](a, d);
  Ric = 0.5 * (Ric + Ric.transpose()).eval();
  const Eigen::Matrix4d Ginv = G.inverse();
  const double s = (Ginv.cwiseProduct(Ric)).sum();

  CurvatureReport r;
  r.xi = xi;
  r.h = h;
  r.G = G;
  r.scalar = s;
  r.einstein_residual = (Ric - 0.25 * s * G).norm() / G.norm();

  // orthonormal frame
  Eigen::LLT<Eigen::Matrix4d> llt(G);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::IllConditioned, "quotient metric is not positive definite");
  const Eigen::Matrix4d M = llt.matrixL().toDenseMatrix().inverse().transpose();
  auto frame = [&](const Tensor4& T) {
    Tensor4 out;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) out[i][j].setZero();
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const Eigen::Matrix4d cd = M.transpose() * T[a][b] * M;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) out[i][j] += M(a, i) * M(b, j) * cd;
      }
    return out;
  };
  const Tensor4 Rf = frame(R);
  Eigen::Matrix4d Ricf = M.transpose() * Ric * M;
  const Eigen::Matrix4d I = Eigen::Matrix4d::Identity();

  Tensor4 W;
  double rn = 0, ccn = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int cc = 0; cc < 4; ++cc)
        for (int d = 0; d < 4; ++d) {
          const double gg = I(a, cc) * I(b, d) - I(a, d) * I(b, cc);
          const double corr = 0.5 * (I(a, cc) * Ricf(b, d) - I(a, d) * Ricf(b, cc) + I(b, d) * Ricf(a, cc) -
                                     I(b, cc) * Ricf(a, d));
          W[a][b](cc, d) = Rf[a][b](cc, d) - corr + s / 6.0 * gg;
          rn += Rf[a][b](cc, d) * Rf[a][b](cc, d);
          const double dev = Rf[a][b](cc, d) - s / 12.0 * gg;
          ccn += dev * dev;
        }
  r.riem_norm = std::sqrt(rn);
  r.constant_curvature = std::sqrt(ccn) / std::max(r.riem_norm, 1e-300);

  // bivectors 01,02,03,23,31,12
  const int P[6][2] = {{0, 1}, {0, 2}, {0, 3}, {2, 3}, {3, 1}, {1, 2}};
  Eigen::Matrix<double, 6, 6> W6;
  for (int I6 = 0; I6 < 6; ++I6)
    for (int J6 = 0; J6 < 6; ++J6) W6(I6, J6) = W[P[I6][0]][P[I6][1]](P[J6][0], P[J6][1]);
  Eigen::Matrix<double, 6, 3> Bp, Bm;
  Bp.setZero();
  Bm.setZero();
  const double k = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 3; ++i) {
    Bp(i, i) = Bm(i, i) = k;
    Bp(i + 3, i) = k;
    Bm(i + 3, i) = -k;
  }
  r.Wplus = Bp.transpose() * W6 * Bp;
  r.Wminus = Bm.transpose() * W6 * Bm;
  r.weyl_sd = r.Wplus.norm();
  r.weyl_asd = r.Wminus.norm();

  const double flat_tol = th.flat * r.riem_norm;
  const bool plus0 = r.weyl_sd < flat_tol, minus0 = r.weyl_asd < flat_tol;
  if (plus0 && minus0) r.vanishing = VanishingHalf::Both;
  else if (std::min(r.weyl_sd, r.weyl_asd) / (r.weyl_sd + r.weyl_asd + 1e-30) < th.self_dual)
    r.vanishing = r.weyl_sd < r.weyl_asd ? VanishingHalf::Plus : VanishingHalf::Minus;

  const bool einstein = r.einstein_residual < th.einstein && s < 0;
  if (einstein && r.vanishing == VanishingHalf::Both) r.verdict = Verdict::ConformallyFlat;
  else if (einstein && r.vanishing != VanishingHalf::None) r.verdict = Verdict::SDE_Negative;
  else r.verdict = Verdict::Failed;
  return r;
}

double constant_curvature_residual(const std::vector<CurvatureReport>& grid) {
  double m = 0;
  for (const auto& r : grid) m = std::max(m, r.constant_curvature);
  return m;
}

Eigen::Vector3d weyl_plus_spectrum(const CurvatureReport& r) {
  const Eigen::Matrix3d& W = r.weyl_sd >= r.weyl_asd ? r.Wplus : r.Wminus;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(0.5 * (W + W.transpose()));
  return es.eigenvalues();
}

double spectral_type_deviation(const Eigen::Vector3d& ev) {
  const double n = ev.norm();
  if (n == 0) return INFINITY;
  Eigen::Vector3d e = ev / n;
  const Eigen::Vector3d a = Eigen::Vector3d(-1, -1, 2) / std::sqrt(6.0);
  const Eigen::Vector3d b = Eigen::Vector3d(-2, 1, 1) / std::sqrt(6.0);
  return std::min((e - a).norm(), (e - b).norm());
}

Grid default_grid(const QuotientChart& c, int n) {
  Grid g;
  g.lo = c.center - c.halfwidth;
  g.hi = c.center + c.halfwidth;
  g.n = {n, n, n, n};
  return g;
}

std::vector<Eigen::Vector4d> grid_points(const Grid& g) {
  std::vector<Eigen::Vector4d> pts;
  for (int i0 = 0; i0 < g.n[0]; ++i0)
    for (int i1 = 0; i1 < g.n[1]; ++i1)
      for (int i2 = 0; i2 < g.n[2]; ++i2)
        for (int i3 = 0; i3 < g.n[3]; ++i3) {
          const int idx[4] = {i0, i1, i2, i3};
          Eigen::Vector4d x;
          for (int a = 0; a < 4; ++a)
            x[a] = g.n[a] == 1 ? 0.5 * (g.lo[a] + g.hi[a]) : g.lo[a] + (g.hi[a] - g.lo[a]) * idx[a] / (g.n[a] - 1);
          pts.push_back(x);
        }
  return pts;
}

std::vector<CurvatureReport> curvature_grid(const QuotientChart& c, const Grid& g, double h, unsigned threads,
                                            const Thresholds& th) {
  const auto pts = grid_points(g);
  std::vector<CurvatureReport> out(pts.size());
  std::vector<std::exception_ptr> errs(pts.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < pts.size(); i = next++) {
      try {
        out[i] = curvature_report(c, pts[i], h, th);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(pts.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

GridSummary summarize(const std::vector<CurvatureReport>& reports, const Thresholds& th) {
  GridSummary s;
  if (reports.empty()) return s;
  s.scalar_min = s.scalar_max = reports[0].scalar;
  double mean = 0;
  bool all_flat = true, all_sde = true;
  s.vanishing = reports[0].vanishing;
  for (const auto& r : reports) {
    s.max_einstein = std::max(s.max_einstein, r.einstein_residual);
    s.scalar_min = std::min(s.scalar_min, r.scalar);
    s.scalar_max = std::max(s.scalar_max, r.scalar);
    mean += r.scalar / reports.size();
    s.max_weyl_ratio = std::max(s.max_weyl_ratio, std::min(r.weyl_sd, r.weyl_asd) / (r.weyl_sd + r.weyl_asd + 1e-30));
    s.max_flat_ratio = std::max(s.max_flat_ratio, std::max(r.weyl_sd, r.weyl_asd) / std::max(r.riem_norm, 1e-300));
    s.constant_curvature = std::max(s.constant_curvature, r.constant_curvature);
    if (r.vanishing != s.vanishing) s.orientation_consistent = false;
    all_flat = all_flat && r.verdict == Verdict::ConformallyFlat;
    all_sde = all_sde && r.verdict == Verdict::SDE_Negative;
    if (r.verdict == Verdict::SDE_Negative)
      s.max_spectral_deviation = std::max(s.max_spectral_deviation, spectral_type_deviation(weyl_plus_spectrum(r)));
  }
  s.scalar_variation = (s.scalar_max - s.scalar_min) / std::abs(mean);
  const bool scalar_ok = s.scalar_max < 0 && s.scalar_variation < 1e-3;
  (void)th;
  if (all_flat && scalar_ok) s.verdict = Verdict::ConformallyFlat;
  else if (all_sde && scalar_ok && s.orientation_consistent) s.verdict = Verdict::SDE_Negative;
  else s.verdict = Verdict::Failed;
  return s;
}

}  // namespace qkq
