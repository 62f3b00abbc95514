#include "qkq/moments.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/SVD>

namespace qkq {

WeightTriple WeightTriple::make(int p0, int p1, int p2) {
  if (std::gcd(std::gcd(p0, p1), p2) != 1)
    throw Error(ErrorKind::Parameter, "weights must have gcd 1: (" + std::to_string(p0) + "," + std::to_string(p1) + "," +
                                          std::to_string(p2) + ")");
  return {p0, p1, p2};
}

std::string to_string(MomentFamily f) {
  switch (f) {
    case MomentFamily::Weighted: return "Weighted";
    case MomentFamily::GenPedersen: return "GenPedersen";
    case MomentFamily::HeightOne: return "HeightOne";
    case MomentFamily::HeightTwo: return "HeightTwo";
    case MomentFamily::Bergman: return "Bergman";
  }
  return "?";
}

MomentFamily moment_family_from_string(const std::string& s) {
  for (auto f : {MomentFamily::Weighted, MomentFamily::GenPedersen, MomentFamily::HeightOne, MomentFamily::HeightTwo,
                 MomentFamily::Bergman})
    if (s == to_string(f)) return f;
  if (s == "PL" || s == "Diagonal") return MomentFamily::Weighted;
  throw Error(ErrorKind::Contract, "unknown moment family '" + s + "'");
}

static void need(const std::vector<double>& params, std::size_t n, MomentFamily f) {
  if (params.size() != n)
    throw Error(ErrorKind::Parameter, to_string(f) + " takes " + std::to_string(n) + " parameters");
}

FamilyGenerator family_generator(MomentFamily f, const std::vector<double>& pr) {
  FamilyGenerator g;
  switch (f) {
    case MomentFamily::Weighted:
    case MomentFamily::Bergman:
      need(pr, 3, f);
      g.M = normal_form_matrix(GeneratorForm::t0diag(pr[0], pr[1], pr[2]));
      if (f == MomentFamily::Bergman) {
        g.k = 2;
        g.l = 1;
      }
      return g;
    case MomentFamily::GenPedersen:
      need(pr, 2, f);
      g.M = normal_form_matrix(GeneratorForm::t0split(1.0, pr[0], pr[1], Basis::VTilde));
      g.basis = Basis::VTilde;
      return g;
    case MomentFamily::HeightOne:
      need(pr, 2, f);
      g.M = normal_form_matrix(GeneratorForm::t1(1.0, pr[0], pr[1], Basis::VTilde));
      g.basis = Basis::VTilde;
      return g;
    case MomentFamily::HeightTwo:
      need(pr, 1, f);
      g.M = normal_form_matrix(GeneratorForm::t2(1.0, pr[0], Basis::VTilde));
      g.basis = Basis::VTilde;
      return g;
  }
  return g;
}

namespace {

// Row vector u^dagger F (form of the basis / signature).
std::vector<Quat> dagger_form(const HVector& u) {
  std::vector<Quat> r(u.size());
  if (u.basis == Basis::VTilde) {
    r[0] = u.c[1].conj();
    r[1] = u.c[0].conj();
    r[2] = u.c[2].conj();
  } else {
    for (int a = 0; a < u.size(); ++a) r[a] = a < u.k ? -u.c[a].conj() : u.c[a].conj();
  }
  return r;
}

}  // namespace

MomentValue mu_raw(const HMatrix3& M, const HVector& u) {
  if (u.size() != 3) throw Error(ErrorKind::Dimension, "moment map needs a 3-component vector");
  HVector Mu = act(M, u);
  auto row = dagger_form(u);
  Quat s;
  for (int a = 0; a < 3; ++a) s += row[a] * Mu.c[a];
  return {im(s)};
}

MomentValue mu_general(const Sp12Element& T, const HVector& u) {
  if (u.k != 1 || u.l != 2) throw Error(ErrorKind::Contract, "sp(1,2) moment map needs a vector of H^{1,2}");
  if (u.basis == Basis::U) return mu_raw(T.Y, u);
  return mu_raw(to_vtilde(T.Y), u);
}

MomentValue f_inhomog(MomentFamily f, const std::vector<double>& pr, const ChartPoint& y) {
  if (y.x.size() != 2) throw Error(ErrorKind::Dimension, "expected two inhomogeneous coordinates");
  const Quat I = Quat::I();
  const Quat& y1 = y.x[0];
  const Quat& y2 = y.x[1];
  auto conjI = [&](const Quat& a) { return a.conj() * I * a; };
  if (!chart_inequality(y)) throw Error(ErrorKind::Domain, "chart inequality violated");
  Quat v;
  switch (f) {
    case MomentFamily::Weighted:
      need(pr, 3, f);
      v = -pr[0] * I + pr[1] * conjI(y1) + pr[2] * conjI(y2);
      break;
    case MomentFamily::Bergman:
      need(pr, 3, f);
      v = -pr[0] * I - pr[1] * conjI(y1) + pr[2] * conjI(y2);
      break;
    case MomentFamily::GenPedersen:
      need(pr, 2, f);
      v = y1.conj() - y1 + pr[0] * (y1.conj() * I + I * y1) + pr[1] * conjI(y2);
      break;
    case MomentFamily::HeightOne:
      need(pr, 2, f);
      v = -I + pr[0] * (I * y1 + y1.conj() * I) + pr[1] * conjI(y2);
      break;
    case MomentFamily::HeightTwo:
      need(pr, 1, f);
      v = I * y2 + y2.conj() * I + pr[0] * (I * y1 + y1.conj() * I) + pr[0] * conjI(y2);
      break;
  }
  return {im(v)};
}

bool zeroset_nonempty(const WeightTriple& p) {
  if (p.p0 == 0) throw Error(ErrorKind::Degenerate, "p0 = 0 is a degenerate weight");
  const double q1 = std::abs(double(p.p1) / p.p0), q2 = std::abs(double(p.p2) / p.p0);
  return std::max(q1, q2) > 1.0;
}

bool action_free(const WeightTriple& p) {
  if (p.p0 <= 0 || p.p1 <= 0 || p.p2 <= 0 || p.p1 <= p.p0)
    throw Error(ErrorKind::Contract, "freeness criterion needs positive weights with p1 > p0");
  const int step = p.all_odd() ? 2 : 1;
  return p.p1 == p.p0 + step && p.p2 <= p.p0 + step;
}

BergmanVerdict bergman_smooth(const WeightTriple& p) {
  if (p.p0 <= 0 || p.p1 <= 0 || p.p2 <= 0) throw Error(ErrorKind::Contract, "Bergman weights must be positive");
  BergmanVerdict v;
  if (p.p0 == 1 && p.p1 == 1 && p.p2 == 1) {
    v.locus = "none";
    return v;
  }
  const int e = p.effective_divisor();
  v.verdict = Smoothness::Orbifold;
  if ((p.p0 + p.p1) / e > 1) {
    v.locus = "w1 circle |w1|^2 = p0/p1";
    v.witness_order = (p.p0 + p.p1) / e;
    v.direct_order = (p.p0 + p.p1) / e;
  } else {
    v.locus = "z2 circle |z2|^2 = p0/p2";
    v.witness_order = (p.p2 + p.p0) / 2;
    v.direct_order = std::abs(p.p2 - p.p0) / e;
  }
  return v;
}

namespace {

struct Problem {
  HMatrix3 A;  // F M in the u basis
  int k, l;
};

HVector lift(const Eigen::Matrix<double, 8, 1>& x, int k, int l) {
  HVector u{k, l, {Quat(1), Quat(x[0], x[1], x[2], x[3]), Quat(x[4], x[5], x[6], x[7])}, Basis::U};
  return u;
}

// -F(u,u) at u0 = 1; positive inside the Minus region
double region_value(const HVector& u) { return -form_value(u); }

Eigen::Vector3d residual(const HMatrix3& Y, const HVector& u) { return mu_raw(Y, u).value; }

// d mu / d x_s exactly: mu = u^dag A u is quadratic
Eigen::Matrix<double, 3, 8> jacobian(const HMatrix3& A, const HVector& u) {
  HVector Au = act(A, u);
  std::array<Quat, 3> uA{};
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 3; ++r) uA[c] += u.c[r].conj() * A(r, c);
  Eigen::Matrix<double, 3, 8> J;
  const Quat basis[4] = {Quat(1), Quat::I(), Quat::J(), Quat::K()};
  for (int s = 0; s < 8; ++s) {
    const int slot = 1 + s / 4;
    const Quat& e = basis[s % 4];
    J.col(s) = im(e.conj() * Au.c[slot] + uA[slot] * e);
  }
  return J;
}

Eigen::Matrix<double, 8, 1> random_start(std::mt19937_64& rng, int k) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  Eigen::Matrix<double, 8, 1> x;
  for (int i = 0; i < 8; ++i) x[i] = nd(rng);
  if (k == 1) {
    x *= 0.999 * std::pow(ud(rng), 1.0 / 8.0) / x.norm();
  } else {
    Eigen::Vector4d x2 = x.tail<4>();
    double bound = std::sqrt(1.0 + x.head<4>().squaredNorm());
    x.tail<4>() = x2 * (0.999 * bound * std::pow(ud(rng), 0.25) / x2.norm());
  }
  return x;
}

bool support_ok(const Eigen::Matrix<double, 8, 1>& x, const std::array<bool, 8>& mask) {
  for (int c = 0; c < 4; ++c)
    if (mask[2 * c] && std::hypot(x[2 * c], x[2 * c + 1]) < 1e-6) return false;
  return true;
}

}  // namespace

std::vector<HVector> zeroset_search(const HMatrix3& Yu, int k, int l, std::uint64_t seed, const SampleOptions& opt) {
  if (k + l != 3 || k < 1) throw Error(ErrorKind::Dimension, "zero-set search is implemented for H^{1,2} and H^{2,1}");
  HMatrix3 F = HMatrix3::Diagonal(Quat(-1), Quat(k >= 2 ? -1 : 1), Quat(1));
  const HMatrix3 A = F * Yu;
  std::mt19937_64 rng(seed);
  const bool restricted = !std::all_of(opt.mask.begin(), opt.mask.end(), [](bool b) { return b; });
  Eigen::Matrix<double, 8, 1> m;
  for (int i = 0; i < 8; ++i) m[i] = opt.mask[i] ? 1.0 : 0.0;

  std::vector<HVector> found;
  for (int start = 0; start < opt.max_starts && static_cast<int>(found.size()) < opt.count; ++start) {
    Eigen::Matrix<double, 8, 1> x = random_start(rng, k).cwiseProduct(m);
    HVector u = lift(x, k, l);
    if (region_value(u) <= 0) continue;
    Eigen::Vector3d r = residual(Yu, u);
    for (int it = 0; it < opt.max_iter && r.norm() > opt.tol; ++it) {
      Eigen::Matrix<double, 3, 8> J = jacobian(A, u);
      for (int s = 0; s < 8; ++s)
        if (!opt.mask[s]) J.col(s).setZero();
      Eigen::JacobiSVD<Eigen::Matrix<double, 3, 8>> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
      svd.setThreshold(1e-12);
      Eigen::Matrix<double, 8, 1> dx = -svd.solve(r);
      double alpha = 1.0;
      bool moved = false;
      for (int h = 0; h < 30; ++h, alpha *= 0.5) {
        Eigen::Matrix<double, 8, 1> xn = x + alpha * dx;
        HVector un = lift(xn, k, l);
        if (region_value(un) <= 0) continue;
        Eigen::Vector3d rn = residual(Yu, un);
        if (rn.norm() < r.norm()) {
          x = xn;
          u = un;
          r = rn;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    if (r.norm() > opt.tol) continue;
    if (region_value(u) <= opt.region_margin) continue;
    if (restricted && !support_ok(x, opt.mask)) continue;
    found.push_back(u);
  }
  return found;
}

std::vector<HVector> zeroset_sample(MomentFamily f, const std::vector<double>& params, std::uint64_t seed,
                                    const SampleOptions& opt) {
  FamilyGenerator g = family_generator(f, params);
  auto pts = zeroset_search(g.Mu(), g.k, g.l, seed, opt);
  if (pts.empty())
    throw Error(ErrorKind::SearchFailure, "no zero of the moment map found after " + std::to_string(opt.max_starts) +
                                              " starts for " + to_string(f));
  if (g.basis == Basis::VTilde)
    for (auto& u : pts) u = basis_change(u);
  return pts;
}

std::vector<SupportIsotropy> realized_supports(const WeightTriple& p, std::uint64_t seed, int starts) {
  const HMatrix3 Y = normal_form_matrix(GeneratorForm::t0diag(p.p0, p.p1, p.p2));
  const int w[4] = {p.p1 - p.p0, p.p1 + p.p0, p.p2 - p.p0, p.p2 + p.p0};  // z1, w1, z2, w2
  std::vector<SupportIsotropy> out;
  for (int s = 1; s < 16; ++s) {
    SampleOptions opt;
    opt.max_starts = starts;
    opt.region_margin = 1e-9;
    SupportIsotropy si;
    int g = 0;
    for (int c = 0; c < 4; ++c) {
      si.support[c] = (s >> c) & 1;
      opt.mask[2 * c] = opt.mask[2 * c + 1] = si.support[c];
      if (si.support[c]) g = std::gcd(g, std::abs(w[c]));
    }
    if (zeroset_search(Y, 1, 2, seed + s, opt).empty()) continue;
    si.order = g / p.effective_divisor();
    out.push_back(si);
  }
  return out;
}

bool action_free_numeric(const WeightTriple& p, std::uint64_t seed) {
  for (const auto& s : realized_supports(p, seed))
    if (s.order != 1) return false;
  return true;
}

}  // namespace qkq
