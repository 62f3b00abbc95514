#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qkq/error.hpp"
#include "qkq/quaternion.hpp"

namespace qkq {

enum class Basis { U, VTilde };
enum class Region { Minus, Null, Plus };

const char* to_string(Basis b);
const char* to_string(Region r);

struct HVector {
  int k = 1;
  int l = 2;
  std::vector<Quat> c;
  Basis basis = Basis::U;

  int size() const { return int(c.size()); }
};

// Inhomogeneous coordinates x_a = u_a u_beta^{-1} (a != beta), in order.
struct ChartPoint {
  int k = 1;
  int l = 2;
  int chart = 0;
  std::vector<Quat> x;
  Basis basis = Basis::U;
};

using Tangent = std::vector<Quat>;

using Matrix6c = Eigen::Matrix<std::complex<double>, 6, 6>;
using Vector6c = Eigen::Matrix<std::complex<double>, 6, 1>;

template <typename S>
struct HMatrix3T {
  std::array<Quaternion<S>, 9> a{};

  Quaternion<S>& operator()(int r, int c) { return a[3 * r + c]; }
  const Quaternion<S>& operator()(int r, int c) const { return a[3 * r + c]; }

  static HMatrix3T Zero() { return {}; }
  static HMatrix3T Identity() {
    HMatrix3T m;
    for (int i = 0; i < 3; ++i) m(i, i) = Quaternion<S>(S(1));
    return m;
  }
  static HMatrix3T Diagonal(const Quaternion<S>& d0, const Quaternion<S>& d1, const Quaternion<S>& d2) {
    HMatrix3T m;
    m(0, 0) = d0;
    m(1, 1) = d1;
    m(2, 2) = d2;
    return m;
  }
};

using HMatrix3 = HMatrix3T<double>;
template <typename S>
using HVec3 = std::array<Quaternion<S>, 3>;

HMatrix3 operator*(const HMatrix3& A, const HMatrix3& B);
HMatrix3 operator+(const HMatrix3& A, const HMatrix3& B);
HMatrix3 operator-(const HMatrix3& A, const HMatrix3& B);
HMatrix3 operator*(double s, const HMatrix3& A);
HMatrix3 adjoint(const HMatrix3& A);
double norm(const HMatrix3& A);  // Frobenius on the 36 real coefficients
double max_abs_diff(const HMatrix3& A, const HMatrix3& B);

template <typename S>
HVec3<S> act(const HMatrix3& M, const HVec3<S>& u) {
  HVec3<S> out;
  for (int r = 0; r < 3; ++r) {
    Quaternion<S> acc(S(0));
    for (int c = 0; c < 3; ++c) acc += Quaternion<S>(M(r, c)) * u[c];
    out[r] = acc;
  }
  return out;
}
HVector act(const HMatrix3& M, const HVector& u);

// The Gram matrices of F_{1,2} in the u basis and of its v-tilde form.
HMatrix3 form_matrix_u();
HMatrix3 form_matrix_vtilde();
// v = P u, u = P^{-1} v; P^{-1} = P^T.
HMatrix3 basis_matrix();
HMatrix3 basis_matrix_inverse();
// Y in u basis <-> P Y P^{-1} in v-tilde basis.
HMatrix3 to_vtilde(const HMatrix3& Yu);
HMatrix3 to_u(const HMatrix3& Yv);

// Residual of F Y + Y^dagger F for the form of the given basis.
double sp12_defect(const HMatrix3& Y, Basis b = Basis::U);
bool is_sp12(const HMatrix3& Y, double tol = 1e-12, Basis b = Basis::U);

// q = a + j b with a, b complex; left multiplication by h = alpha + j beta is
// [[alpha, -conj(beta)], [beta, conj(alpha)]] on (a, b). Interleaved (a0,b0,a1,b1,a2,b2).
std::array<std::complex<double>, 2> to_cpair(const Quat& q);
Quat from_cpair(std::complex<double> a, std::complex<double> b);
// x = z + w j, the split used for circle actions
inline std::complex<double> z_of(const Quat& q) { return {q.w, q.x}; }
inline std::complex<double> w_of(const Quat& q) { return {q.y, q.z}; }
inline Quat zw(std::complex<double> z, std::complex<double> w) { return {z.real(), z.imag(), w.real(), w.imag()}; }
Matrix6c complexify(const HMatrix3& Y);
HMatrix3 dequaternify(const Matrix6c& M);
Vector6c complexify(const HVector& u);

// Forms
Quat form_F(int k, int l, const HVector& u, const HVector& v);
double form_value(const HVector& u);  // F(u,u), in whichever basis u lives
double vtilde_form(const HVector& v);
Region region(const HVector& u, double tol = 1e-9);
HVector psi(const HVector& u);  // reverse coordinates, (k,l) -> (l,k)

ChartPoint to_chart(const HVector& u, int beta, double tol = 1e-12);
HVector from_chart(const ChartPoint& p);
bool chart_inequality(const ChartPoint& p);

HVector basis_change(const HVector& u);
HVector basis_change_inverse(const HVector& v);

// sum eps_a Re(conj(a_a) b_a) with eps = -1 on the first k-1 slots
template <typename S>
S chart_dot(int k, const std::vector<Quaternion<S>>& a, const std::vector<Quaternion<S>>& b) {
  S s(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    S d = dot(a[i], b[i]);
    s += (static_cast<int>(i) < k - 1) ? S(-d) : d;
  }
  return s;
}

template <typename S>
Quaternion<S> chart_qdot(int k, const std::vector<Quaternion<S>>& a, const std::vector<Quaternion<S>>& x) {
  Quaternion<S> s(S(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    Quaternion<S> t = a[i].conj() * x[i];
    if (static_cast<int>(i) < k - 1) s -= t; else s += t;
  }
  return s;
}

// Polarized g^-_{k,l} at chart point x.
template <typename S>
S ambient_metric_x(int k, const std::vector<Quaternion<S>>& x, const std::vector<Quaternion<S>>& a,
                   const std::vector<Quaternion<S>>& b) {
  S D = S(1) - chart_dot(k, x, x);
  Quaternion<S> ax = chart_qdot(k, a, x);
  Quaternion<S> bx = chart_qdot(k, b, x);
  return (chart_dot(k, a, b) + dot(ax, bx) / D) / D;
}

double ambient_metric(int k, int l, const ChartPoint& p, const Tangent& t1, const Tangent& t2);
Eigen::MatrixXd ambient_gram(const ChartPoint& p);

// Exponentials
HMatrix3 mat_exp(const HMatrix3& Y, double t, Basis b = Basis::U);  // scaling and squaring on the 6x6 image

// exp(t T) for T = [[i p0, lam, 0], [lam, i p1, 0], [0, 0, i p2]]
HMatrix3 tpl_generator(double p0, double p1, double p2, double lambda);
enum class TplBranch { Plus, Zero, Minus };
TplBranch tpl_branch(double p0, double p1, double lambda);
HMatrix3 tpl_exp(TplBranch branch, double p0, double p1, double p2, double lambda, double t);
HMatrix3 tpl_exp(double p0, double p1, double p2, double lambda, double t);

// max |A^dagger F A - F|
double form_defect(const HMatrix3& A, Basis b = Basis::U);

}  // namespace qkq
