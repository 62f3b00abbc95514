#include "qkq/hyperfun.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Dense>

#include "qkq/error.hpp"

namespace qkq {

PoleSet PoleSet::monopole(double a, double b, int charge) {
  PoleSet s;
  s.real_poles.push_back({a, b, charge});
  return s;
}

PoleSet PoleSet::pedersen(double a, double b, double c) {
  PoleSet s;
  s.complex_pair = ComplexPair{a, b, c};
  return s;
}

PoleSet PoleSet::pure_dipole(double c) {
  PoleSet s;
  s.dipole = c;
  return s;
}

PoleSet PoleSet::pure_tripole(double c) {
  PoleSet s;
  s.tripole = c;
  return s;
}

bool PoleSet::empty() const { return real_poles.empty() && !complex_pair && dipole == 0 && tripole == 0; }

std::string PoleSet::describe() const {
  std::ostringstream os;
  os.precision(6);
  const char* sep = "";
  for (const auto& p : real_poles) {
    os << sep << (p.charge < 0 ? "-" : "+") << "mono(" << p.a << "," << p.b << ")";
    sep = " ";
  }
  if (complex_pair) {
    os << sep << "pedersen(" << complex_pair->a << "," << complex_pair->b << "," << complex_pair->c << ")";
    sep = " ";
  }
  if (dipole != 0) {
    os << sep << dipole << "*dipole";
    sep = " ";
  }
  if (tripole != 0) os << sep << tripole << "*tripole";
  return os.str();
}

Eigen::Matrix2d grammian(const GramPair& g) {
  const double w = g.x1.cross(g.x2).norm();
  if (!(w > 1e-12)) throw Error(ErrorKind::Degenerate, "decomposable pair: |x1 ^ x2| <= 1e-12");
  Eigen::Matrix2d A;
  A << g.x1.squaredNorm(), g.x1.dot(g.x2), g.x1.dot(g.x2), g.x2.squaredNorm();
  return A / w;
}

HalfPlanePoint halfplane_from_gram(const Eigen::Matrix2d& A) {
  if (!(A(0, 0) > 0) || !(A.determinant() > 0)) throw Error(ErrorKind::Domain, "Gram matrix is not positive definite");
  if (std::abs(A.determinant() - 1) > 1e-9) throw Error(ErrorKind::Contract, "Gram matrix must have determinant 1");
  return {1.0 / A(0, 0), A(0, 1) / A(0, 0)};
}

Eigen::Matrix2d gram_from_halfplane(const HalfPlanePoint& p) {
  Eigen::Matrix2d A;
  A << 1 / p.rho, p.eta / p.rho, p.eta / p.rho, (p.rho * p.rho + p.eta * p.eta) / p.rho;
  return A;
}

namespace {

bool near_branch(const HalfPlanePoint& p) { return std::abs(p.eta) < 1e-2 && p.rho < 1 + 1e-2; }

}  // namespace

double eval_F(const PoleSet& ps, const HalfPlanePoint& p) {
  const double r = p.rho, e = p.eta;
  if (!(r > 0)) throw Error(ErrorKind::Domain, "rho must be positive");
  const double sr = std::sqrt(r);
  double F = 0;
  for (const auto& q : ps.real_poles) F += q.charge * std::hypot(q.a * r, q.a * e - q.b) / sr;
  if (ps.complex_pair) {
    if (near_branch(p)) throw Error(ErrorKind::Branch, "within 1e-2 of the branch locus eta = 0, rho < 1");
    const auto& c = *ps.complex_pair;
    const std::complex<double> z(r * r + e * e - 1, 2 * e);
    const std::complex<double> term = 0.5 * std::complex<double>(c.b, c.c) * std::sqrt(z) / sr;
    F += c.a / sr + 2 * term.real();
  }
  const double n2 = r * r + e * e;
  if (ps.dipole != 0) F += ps.dipole * e / (sr * std::sqrt(n2));
  if (ps.tripole != 0) F += 0.5 * ps.tripole * r * sr / (n2 * std::sqrt(n2));
  return F;
}

double eval_F_lifted(const PoleSet& ps, const Eigen::Matrix2d& A) {
  const double d = A.determinant();
  if (!(d > 0) || !(A(0, 0) > 0)) throw Error(ErrorKind::Domain, "Gram matrix is not positive definite");
  return std::pow(d, 0.25) * eval_F(ps, halfplane_from_gram(A / std::sqrt(d)));
}

double singular_distance(const PoleSet& ps, const HalfPlanePoint& p) {
  double d = p.rho;
  for (const auto& q : ps.real_poles) {
    if (q.a == 0) continue;
    d = std::min(d, std::hypot(p.rho, p.eta - q.b / q.a));
  }
  if (ps.dipole != 0 || ps.tripole != 0) d = std::min(d, std::hypot(p.rho, p.eta));
  if (ps.complex_pair) {
    if (p.rho < 1) d = std::min(d, std::abs(p.eta));
    else d = std::min(d, std::hypot(p.rho - 1, p.eta));
  }
  return d;
}

double laplace_check(const PoleSet& ps, const HalfPlanePoint& p) {
  const double h = 2e-3 * p.rho;
  if (p.rho - 2 * h <= 0) throw Error(ErrorKind::Domain, "stencil crosses rho <= 0");
  auto F = [&](double dr, double de) { return eval_F(ps, {p.rho + dr, p.eta + de}); };
  const double f0 = F(0, 0);
  auto d2 = [&](double a, double b, double c, double d) { return (-a + 16 * b - 30 * f0 + 16 * c - d) / (12 * h * h); };
  const double frr = d2(F(-2 * h, 0), F(-h, 0), F(h, 0), F(2 * h, 0));
  const double fee = d2(F(0, -2 * h), F(0, -h), F(0, h), F(0, 2 * h));
  return std::abs(p.rho * p.rho * (frr + fee) - 0.75 * f0);
}

std::string to_string(TorusFamily f) {
  switch (f) {
    case TorusFamily::Diagonal: return "Diagonal";
    case TorusFamily::HeightOne: return "HeightOne";
    case TorusFamily::HeightTwo: return "HeightTwo";
  }
  return "?";
}

TorusFamily torus_family_from_string(const std::string& s) {
  if (s == "Diagonal" || s == "PL" || s == "Weighted") return TorusFamily::Diagonal;
  if (s == "HeightOne") return TorusFamily::HeightOne;
  if (s == "HeightTwo") return TorusFamily::HeightTwo;
  throw Error(ErrorKind::Parameter, "unknown torus family '" + s + "'");
}

std::string moment_family_name(TorusFamily f) { return f == TorusFamily::Diagonal ? "Weighted" : to_string(f); }

std::array<ImQuaternion, 3> torus_moment_coords(TorusFamily f, const HVector& u) {
  if (u.size() != 3) throw Error(ErrorKind::Dimension, "torus moment coordinates need 3 components");
  const Basis want = f == TorusFamily::Diagonal ? Basis::U : Basis::VTilde;
  if (u.basis != want) throw Error(ErrorKind::Contract, "vector basis does not match the family");
  const Quat I = Quat::I();
  const auto& v = u.c;
  auto sym = [&](const Quat& a, const Quat& b) { return im(a.conj() * I * b + b.conj() * I * a); };
  switch (f) {
    case TorusFamily::Diagonal:
      return {im(v[0].conj() * I * v[0]), im(v[1].conj() * I * v[1]), im(v[2].conj() * I * v[2])};
    case TorusFamily::HeightOne:
      return {sym(v[1], v[0]), im(-(v[0].conj() * I * v[0])), im(v[2].conj() * I * v[2])};
    case TorusFamily::HeightTwo:
      return {ImQuaternion(sym(v[1], v[0]) + im(v[2].conj() * I * v[2])), sym(v[2], v[0]),
              im(-(v[0].conj() * I * v[0]))};
  }
  return {};
}

double quadratic_in_moments(TorusFamily f, const std::array<ImQuaternion, 3>& y) {
  switch (f) {
    case TorusFamily::Diagonal: return -y[0].norm() + y[1].norm() + y[2].norm();
    case TorusFamily::HeightOne: {
      const double n1 = y[1].norm();
      if (n1 < 1e-10) throw Error(ErrorKind::Degenerate, "|y1| vanishes");
      return -y[0].dot(y[1]) / n1 + y[2].norm();
    }
    case TorusFamily::HeightTwo: {
      const double n2 = y[2].norm();
      if (n2 < 1e-10) throw Error(ErrorKind::Degenerate, "|y2| vanishes");
      const double a = y[1].squaredNorm() * n2 * n2 - std::pow(y[1].dot(y[2]), 2);
      return (a - 2 * y[0].dot(y[2]) * n2 * n2) / (2 * n2 * n2 * n2);
    }
  }
  return 0;
}

KernelBasis kernel_basis(TorusFamily f, const std::vector<double>& pr) {
  KernelBasis kb;
  switch (f) {
    case TorusFamily::Diagonal: {
      if (pr.size() != 3) throw Error(ErrorKind::Parameter, "Diagonal needs three weights");
      if (pr[0] == 0 || pr[1] == 0 || pr[2] == 0) throw Error(ErrorKind::Parameter, "weights must be nonzero");
      kb.a = {pr[1], -pr[0], 0};
      kb.b = {pr[2], 0, -pr[0]};
      kb.sign = {-1, 1, 1};
      return kb;
    }
    case TorusFamily::HeightOne: {
      if (pr.size() != 2) throw Error(ErrorKind::Parameter, "HeightOne needs (p, q)");
      const double p = pr[0], q = pr[1];
      // zero set: p y0 + y1 + q y2 = 0; normalize (a1, b1) = (1, 0)
      if (q != 0) {
        kb.a = {0, 1, -1 / q};
        kb.b = {q, 0, -p};
      } else if (p != 0) {
        kb.a = {-1 / p, 1, 0};
        kb.b = {0, 0, 1};
      } else {
        throw Error(ErrorKind::Parameter, "HeightOne(0,0) has no kernel basis");
      }
      return kb;
    }
    case TorusFamily::HeightTwo: {
      if (pr.size() != 1) throw Error(ErrorKind::Parameter, "HeightTwo needs p");
      // zero set: p y0 + y1 = 0
      kb.a = {0, 0, 1};
      kb.b = {-1, pr[0], 0};
      return kb;
    }
  }
  return kb;
}

PoleSet eigenfunction_from_basis(TorusFamily f, const KernelBasis& kb) {
  PoleSet ps;
  switch (f) {
    case TorusFamily::Diagonal:
      for (int j = 0; j < 3; ++j) ps.real_poles.push_back({kb.a[j], kb.b[j], kb.sign[j]});
      return ps;
    case TorusFamily::HeightOne:
      if (kb.a[1] != 1 || kb.b[1] != 0) throw Error(ErrorKind::Contract, "HeightOne basis must have (a1, b1) = (1, 0)");
      if (kb.a[0] != 0) ps.real_poles.push_back({std::abs(kb.a[0]), 0, kb.a[0] > 0 ? -1 : 1});
      ps.dipole = kb.b[0];
      ps.real_poles.push_back({kb.a[2], kb.b[2], 1});
      return ps;
    case TorusFamily::HeightTwo:
      if (kb.a[0] != 0 || kb.a[1] != 0 || kb.a[2] != 1 || kb.b[2] != 0)
        throw Error(ErrorKind::Contract, "HeightTwo basis must be a = (0,0,1), b = (-a0,-a1,0)");
      ps.dipole = kb.b[0];  // -a0
      ps.tripole = kb.b[1] * kb.b[1];
      return ps;
  }
  return ps;
}

PoleSet eigenfunction_of_quotient(TorusFamily f, const std::vector<double>& pr) {
  if (f == TorusFamily::HeightTwo && pr.size() == 2) {
    KernelBasis kb;
    kb.a = {0, 0, 1};
    kb.b = {-pr[0], -pr[1], 0};
    return eigenfunction_from_basis(f, kb);
  }
  return eigenfunction_from_basis(f, kernel_basis(f, pr));
}

GramPair recover_x(const KernelBasis& kb, const std::array<ImQuaternion, 3>& y, double* residual) {
  Eigen::Matrix<double, 3, 2> S;
  Eigen::Matrix3d W;  // rows j, columns imaginary components
  for (int j = 0; j < 3; ++j) {
    S(j, 0) = -kb.b[j];
    S(j, 1) = kb.a[j];
    W.row(j) = kb.sign[j] * y[j].transpose();
  }
  const Eigen::Matrix<double, 2, 3> X = S.colPivHouseholderQr().solve(W);
  if (residual) *residual = (S * X - W).norm() / std::max(1.0, W.norm());
  return {X.row(0).transpose(), X.row(1).transpose()};
}

PullbackResult pullback_check(TorusFamily f, const std::vector<double>& params, const std::vector<HVector>& samples,
                              const KernelBasis* basis) {
  const KernelBasis kb = basis ? *basis : kernel_basis(f, params);
  const PoleSet ps = eigenfunction_from_basis(f, kb);
  PullbackResult r;
  std::vector<double> ratios;
  for (const auto& u : samples) {
    const double Fu = form_value(u);
    if (std::abs(Fu) < 1e-6) {
      ++r.skipped;
      continue;
    }
    const auto y = torus_moment_coords(f, u);
    double res = 0;
    const GramPair x = recover_x(kb, y, &res);
    r.max_lsq_residual = std::max(r.max_lsq_residual, res);
    if (res > 1e-8) throw Error(ErrorKind::SampleInconsistency, "sample is not on the zero set (least-squares residual)");
    Eigen::Matrix2d A;
    A << x.x1.squaredNorm(), x.x1.dot(x.x2), x.x1.dot(x.x2), x.x2.squaredNorm();
    ratios.push_back(eval_F_lifted(ps, A) / Fu);
  }
  r.used = static_cast<int>(ratios.size());
  if (ratios.empty()) throw Error(ErrorKind::SampleInconsistency, "no usable samples");
  double mean = 0;
  for (double v : ratios) mean += v / ratios.size();
  r.mean_ratio = mean;
  for (double v : ratios) r.deviation = std::max(r.deviation, std::abs(v - mean) / std::abs(mean));
  return r;
}

}  // namespace qkq
