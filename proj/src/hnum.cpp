#include "qkq/hnum.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace qkq {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Degenerate: return "degenerate input";
    case ErrorKind::ChartDomain: return "chart-domain error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Contract: return "contract error";
    case ErrorKind::Parameter: return "parameter error";
    case ErrorKind::IllConditioned: return "ill-conditioned";
    case ErrorKind::SearchFailure: return "search failure";
    case ErrorKind::NullOrbit: return "null-orbit error";
    case ErrorKind::Branch: return "branch-cut proximity";
    case ErrorKind::SampleInconsistency: return "sample inconsistency";
    case ErrorKind::Internal: return "internal error";
  }
  return "error";
}

const char* to_string(Basis b) { return b == Basis::U ? "u" : "v"; }

const char* to_string(Region r) {
  switch (r) {
    case Region::Minus: return "minus";
    case Region::Null: return "null";
    case Region::Plus: return "plus";
  }
  return "?";
}

HMatrix3 operator*(const HMatrix3& A, const HMatrix3& B) {
  HMatrix3 C;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      for (int m = 0; m < 3; ++m) C(r, c) += A(r, m) * B(m, c);
  return C;
}

HMatrix3 operator+(const HMatrix3& A, const HMatrix3& B) {
  HMatrix3 C;
  for (int i = 0; i < 9; ++i) C.a[i] = A.a[i] + B.a[i];
  return C;
}

HMatrix3 operator-(const HMatrix3& A, const HMatrix3& B) {
  HMatrix3 C;
  for (int i = 0; i < 9; ++i) C.a[i] = A.a[i] - B.a[i];
  return C;
}

HMatrix3 operator*(double s, const HMatrix3& A) {
  HMatrix3 C;
  for (int i = 0; i < 9; ++i) C.a[i] = s * A.a[i];
  return C;
}

HMatrix3 adjoint(const HMatrix3& A) {
  HMatrix3 C;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) C(r, c) = A(c, r).conj();
  return C;
}

double norm(const HMatrix3& A) {
  double s = 0;
  for (const auto& q : A.a) s += q.norm2();
  return std::sqrt(s);
}

double max_abs_diff(const HMatrix3& A, const HMatrix3& B) {
  double m = 0;
  for (int i = 0; i < 9; ++i) {
    Quat d = A.a[i] - B.a[i];
    m = std::max({m, std::abs(d.w), std::abs(d.x), std::abs(d.y), std::abs(d.z)});
  }
  return m;
}

HVector act(const HMatrix3& M, const HVector& u) {
  if (u.size() != 3) throw Error(ErrorKind::Dimension, "3x3 matrix applied to vector of size " + std::to_string(u.size()));
  HVec3<double> in{u.c[0], u.c[1], u.c[2]};
  auto out = act(M, in);
  HVector v = u;
  v.c.assign(out.begin(), out.end());
  return v;
}

HMatrix3 form_matrix_u() { return HMatrix3::Diagonal(Quat(-1), Quat(1), Quat(1)); }

HMatrix3 form_matrix_vtilde() {
  HMatrix3 F;
  F(0, 1) = Quat(1);
  F(1, 0) = Quat(1);
  F(2, 2) = Quat(1);
  return F;
}

HMatrix3 basis_matrix() {
  const double s = 1.0 / std::sqrt(2.0);
  HMatrix3 P;
  P(0, 0) = Quat(s);
  P(0, 1) = Quat(s);
  P(1, 0) = Quat(-s);
  P(1, 1) = Quat(s);
  P(2, 2) = Quat(1);
  return P;
}

HMatrix3 basis_matrix_inverse() { return adjoint(basis_matrix()); }

HMatrix3 to_vtilde(const HMatrix3& Yu) { return basis_matrix() * Yu * basis_matrix_inverse(); }
HMatrix3 to_u(const HMatrix3& Yv) { return basis_matrix_inverse() * Yv * basis_matrix(); }

double sp12_defect(const HMatrix3& Y, Basis b) {
  HMatrix3 F = b == Basis::U ? form_matrix_u() : form_matrix_vtilde();
  return max_abs_diff(F * Y + adjoint(Y) * F, HMatrix3::Zero());
}

bool is_sp12(const HMatrix3& Y, double tol, Basis b) { return sp12_defect(Y, b) <= tol * std::max(1.0, norm(Y)); }

std::array<std::complex<double>, 2> to_cpair(const Quat& q) {
  return {std::complex<double>(q.w, q.x), std::complex<double>(q.y, -q.z)};
}

Quat from_cpair(std::complex<double> a, std::complex<double> b) { return {a.real(), a.imag(), b.real(), -b.imag()}; }

Matrix6c complexify(const HMatrix3& Y) {
  Matrix6c M;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      auto [al, be] = to_cpair(Y(r, c));
      M(2 * r, 2 * c) = al;
      M(2 * r, 2 * c + 1) = -std::conj(be);
      M(2 * r + 1, 2 * c) = be;
      M(2 * r + 1, 2 * c + 1) = std::conj(al);
    }
  return M;
}

// Averages the two copies of each entry, so a nearly quaternionic 6x6 maps to
// its nearest quaternionic matrix.
HMatrix3 dequaternify(const Matrix6c& M) {
  HMatrix3 Y;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      std::complex<double> al = 0.5 * (M(2 * r, 2 * c) + std::conj(M(2 * r + 1, 2 * c + 1)));
      std::complex<double> be = 0.5 * (M(2 * r + 1, 2 * c) - std::conj(M(2 * r, 2 * c + 1)));
      Y(r, c) = from_cpair(al, be);
    }
  return Y;
}

Vector6c complexify(const HVector& u) {
  if (u.size() != 3) throw Error(ErrorKind::Dimension, "expected 3 components");
  Vector6c v;
  for (int r = 0; r < 3; ++r) {
    auto [a, b] = to_cpair(u.c[r]);
    v(2 * r) = a;
    v(2 * r + 1) = b;
  }
  return v;
}

Quat form_F(int k, int l, const HVector& u, const HVector& v) {
  if (u.k != k || u.l != l || v.k != k || v.l != l || u.size() != k + l || v.size() != k + l)
    throw Error(ErrorKind::Dimension, "signature mismatch in form_F");
  if (u.basis != Basis::U || v.basis != Basis::U) throw Error(ErrorKind::Contract, "form_F expects u-basis vectors");
  Quat s;
  for (int a = 0; a < k + l; ++a) {
    Quat t = u.c[a].conj() * v.c[a];
    if (a < k) s -= t; else s += t;
  }
  return s;
}

double vtilde_form(const HVector& v) {
  if (v.size() != 3) throw Error(ErrorKind::Dimension, "v-tilde form needs 3 components");
  return 2.0 * dot(v.c[0], v.c[1]) + v.c[2].norm2();
}

double form_value(const HVector& u) {
  if (u.basis == Basis::VTilde) return vtilde_form(u);
  return form_F(u.k, u.l, u, u).w;
}

Region region(const HVector& u, double tol) {
  double n2 = 0;
  for (const auto& q : u.c) n2 += q.norm2();
  if (n2 == 0) throw Error(ErrorKind::Degenerate, "zero vector has no region");
  double f = form_value(u);
  if (std::abs(f) < tol * n2) return Region::Null;
  return f < 0 ? Region::Minus : Region::Plus;
}

HVector psi(const HVector& u) {
  HVector v = u;
  std::swap(v.k, v.l);
  v.c.assign(u.c.rbegin(), u.c.rend());
  return v;
}

ChartPoint to_chart(const HVector& u, int beta, double tol) {
  if (beta < 0 || beta >= u.size()) throw Error(ErrorKind::Dimension, "chart index out of range");
  double nb = abs(u.c[beta]);
  double n2 = 0;
  for (const auto& q : u.c) n2 += q.norm2();
  if (nb <= tol * std::sqrt(n2)) throw Error(ErrorKind::ChartDomain, "u_" + std::to_string(beta) + " vanishes");
  Quat inv = u.c[beta].inverse();
  ChartPoint p{u.k, u.l, beta, {}, u.basis};
  for (int a = 0; a < u.size(); ++a)
    if (a != beta) p.x.push_back(u.c[a] * inv);
  return p;
}

HVector from_chart(const ChartPoint& p) {
  if (static_cast<int>(p.x.size()) != p.k + p.l - 1) throw Error(ErrorKind::Dimension, "chart point has wrong length");
  HVector u{p.k, p.l, {}, p.basis};
  for (int a = 0, i = 0; a < p.k + p.l; ++a) u.c.push_back(a == p.chart ? Quat(1) : p.x[i++]);
  return u;
}

bool chart_inequality(const ChartPoint& p) { return form_value(from_chart(p)) < 0; }

HVector basis_change(const HVector& u) {
  if (u.basis != Basis::U) throw Error(ErrorKind::Contract, "basis_change expects a u-basis vector");
  HVector v = act(basis_matrix(), u);
  v.basis = Basis::VTilde;
  return v;
}

HVector basis_change_inverse(const HVector& v) {
  if (v.basis != Basis::VTilde) throw Error(ErrorKind::Contract, "inverse basis change expects a v-basis vector");
  HVector u = act(basis_matrix_inverse(), v);
  u.basis = Basis::U;
  return u;
}

double ambient_metric(int k, int l, const ChartPoint& p, const Tangent& t1, const Tangent& t2) {
  const std::size_t n = static_cast<std::size_t>(k + l - 1);
  if (p.k != k || p.l != l || p.x.size() != n || t1.size() != n || t2.size() != n)
    throw Error(ErrorKind::Dimension, "ambient_metric size mismatch");
  if (p.basis != Basis::U || p.chart >= k) throw Error(ErrorKind::Contract, "ambient metric lives on a negative-slot u chart");
  if (1.0 - chart_dot(k, p.x, p.x) <= 0) throw Error(ErrorKind::Domain, "chart inequality 1 - |x|^2 > 0 violated");
  return ambient_metric_x(k, p.x, t1, t2);
}

Eigen::MatrixXd ambient_gram(const ChartPoint& p) {
  const int n = static_cast<int>(p.x.size());
  auto e = [&](int i) {
    Tangent t(n);
    Eigen::Vector4d c = Eigen::Vector4d::Unit(i % 4);
    t[i / 4] = Quat(c[0], c[1], c[2], c[3]);
    return t;
  };
  Eigen::MatrixXd G(4 * n, 4 * n);
  for (int i = 0; i < 4 * n; ++i)
    for (int j = 0; j <= i; ++j) G(i, j) = G(j, i) = ambient_metric(p.k, p.l, p, e(i), e(j));
  return G;
}

HMatrix3 mat_exp(const HMatrix3& Y, double t, Basis b) {
  if (!is_sp12(Y, 1e-12, b)) throw Error(ErrorKind::Contract, "generator is not in sp(1,2)");
  Matrix6c M = complexify(Y) * std::complex<double>(t);
  return dequaternify(M.exp());
}

HMatrix3 tpl_generator(double p0, double p1, double p2, double lambda) {
  HMatrix3 T = HMatrix3::Diagonal(Quat(0, p0), Quat(0, p1), Quat(0, p2));
  T(0, 1) = Quat(lambda);
  T(1, 0) = Quat(lambda);
  return T;
}

TplBranch tpl_branch(double p0, double p1, double lambda) {
  double a = 0.5 * (p0 - p1);
  double d = lambda * lambda - a * a;
  if (d > 0) return TplBranch::Plus;
  if (d < 0) return TplBranch::Minus;
  return TplBranch::Zero;
}

HMatrix3 tpl_exp(TplBranch branch, double p0, double p1, double p2, double lambda, double t) {
  using C = std::complex<double>;
  const double al = 0.5 * (p0 - p1), be = 0.5 * (p0 + p1);
  const double g = std::sqrt(std::abs(al * al - lambda * lambda));
  const C eb = std::polar(1.0, be * t);
  C d0, d1, off;
  switch (branch) {
    case TplBranch::Plus:
      d0 = eb * C(std::cosh(g * t), al / g * std::sinh(g * t));
      d1 = eb * C(std::cosh(g * t), -al / g * std::sinh(g * t));
      off = eb * (lambda / g * std::sinh(g * t));
      break;
    case TplBranch::Minus:
      d0 = eb * C(std::cos(g * t), al / g * std::sin(g * t));
      d1 = eb * C(std::cos(g * t), -al / g * std::sin(g * t));
      off = eb * (lambda / g * std::sin(g * t));
      break;
    case TplBranch::Zero:
      d0 = eb * C(1.0, al * t);
      d1 = eb * C(1.0, -al * t);
      off = eb * (lambda * t);
      break;
  }
  HMatrix3 A;
  A(0, 0) = from_cpair(d0, 0);
  A(1, 1) = from_cpair(d1, 0);
  A(0, 1) = from_cpair(off, 0);
  A(1, 0) = from_cpair(off, 0);
  A(2, 2) = from_cpair(std::polar(1.0, p2 * t), 0);
  return A;
}

HMatrix3 tpl_exp(double p0, double p1, double p2, double lambda, double t) {
  return tpl_exp(tpl_branch(p0, p1, lambda), p0, p1, p2, lambda, t);
}

double form_defect(const HMatrix3& A, Basis b) {
  HMatrix3 F = b == Basis::U ? form_matrix_u() : form_matrix_vtilde();
  return max_abs_diff(adjoint(A) * F * A, F);
}

}  // namespace qkq
