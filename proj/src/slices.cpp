#include "qkq/slices.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/AutoDiff>

namespace qkq {

using AD = Eigen::AutoDiffScalar<Eigen::Vector4d>;

std::string to_string(SliceFamily f) {
  switch (f) {
    case SliceFamily::PL: return "PL";
    case SliceFamily::GenPedersen: return "GenPedersen";
    case SliceFamily::HeightOne: return "HeightOne";
    case SliceFamily::HeightTwo: return "HeightTwo";
    case SliceFamily::Bergman: return "Bergman";
  }
  return "?";
}

SliceFamily slice_family_from_string(const std::string& s) {
  for (auto f : {SliceFamily::PL, SliceFamily::GenPedersen, SliceFamily::HeightOne, SliceFamily::HeightTwo,
                 SliceFamily::Bergman})
    if (s == to_string(f)) return f;
  throw Error(ErrorKind::Parameter, "unknown family '" + s + "'");
}

std::string QuotientChart::name() const {
  std::ostringstream os;
  os << to_string(family) << "(";
  for (std::size_t i = 0; i < params.size(); ++i) os << (i ? "," : "") << params[i];
  os << ")";
  return os.str();
}

namespace {

template <typename S>
Quaternion<S> iconj(const Quaternion<S>& y) {  // conj(y) i y
  return y.conj() * Quaternion<S>(S(0), S(1), S(0), S(0)) * y;
}

template <typename S>
S sq(const S& v) { return v * v; }

// Homogeneous point in the family's native basis; writes the local slice
// inequality margin (positive inside) to `margin` when given.
template <typename S>
HVec3<S> native_point(const QuotientChart& c, const Eigen::Matrix<S, 4, 1>& xi, double* margin) {
  using std::sqrt;
  using std::cos;
  using std::sin;
  using Qs = Quaternion<S>;
  const auto& pr = c.params;
  const Qs one(S(1));
  auto val = [](const S& v) -> double {
    if constexpr (std::is_same_v<S, double>) return v;
    else return v.value();
  };
  switch (c.family) {
    case SliceFamily::PL: {
      const double p0 = pr[0], p1 = pr[1], p2 = pr[2];
      const S a = xi[0], b = xi[1], cc = xi[2], d = xi[3];
      const S al2 = cc * cc + d * d, z2sq = a * a + b * b;
      const S z1sq = (p0 / p1) / (S(1) - p1 * p2 * al2) - (p2 / p1) * z2sq;
      if (margin) {
        const double A = val(al2), Z = val(z2sq);
        double fp = (p1 - p2) * Z * sq(1 - p1 * p2 * A) + p1 * p1 * p2 * A - 1;
        *margin = std::min({1 - p1 * p1 * p2 * A, val(z1sq), -fp});
      }
      const S z1 = sqrt(z1sq);
      // alpha conj(z2)
      const S ar = cc * a + d * b, ai = d * a - cc * b;
      Qs x1(z1, S(0), S(-p2) * ar, S(-p2) * ai);
      Qs x2(a, b, S(p1) * z1 * cc, S(p1) * z1 * d);
      return {one, x1, x2};
    }
    case SliceFamily::GenPedersen: {
      const double p = pr[0], q = pr[1];
      const Qs y2(xi[0], xi[1], xi[2], xi[3]);
      const Qs Q = iconj(y2);
      const S b = (q * Q.x - p) / 2.0;
      const double det = 4.0 + 4.0 * p * p;
      const S c1 = (2.0 * q * Q.y - 2.0 * p * q * Q.z) / det;
      const S d1 = (2.0 * q * Q.z + 2.0 * p * q * Q.y) / det;
      if (margin) *margin = 1.0 - val(y2.norm2());
      return {one, Qs(S(-0.5), b, c1, d1), y2};
    }
    case SliceFamily::HeightOne: {
      const double p = pr[0], q = pr[1];
      if (p != 0.0) {
        const Qs y2(xi[0], xi[1], xi[2], S(-xi[3]));
        const Qs Q = iconj(y2);
        const S a = (1.0 - q * Q.x) / (2.0 * p);
        const S d = q * Q.y / (2.0 * p);
        const S c1 = -q * Q.z / (2.0 * p);
        if (margin) {
          const double z = val(xi[0] * xi[0] + xi[1] * xi[1]), w = val(xi[2] * xi[2] + xi[3] * xi[3]);
          const double lhs = (p - q) * z + (p + q) * w;
          *margin = p > 0 ? -1.0 - lhs : lhs + 1.0;
        }
        return {one, Qs(a, S(0), c1, d), y2};
      }
      const double r = 1.0 / std::sqrt(std::abs(q));
      const S s = xi[3];
      Qs y2 = q > 0 ? Qs(r * cos(s), r * sin(s), S(0), S(0)) : Qs(S(0), S(0), r * cos(s), r * sin(s));
      if (margin) *margin = -(2.0 * val(xi[0]) + 1.0 / std::abs(q));
      return {one, Qs(xi[0], S(0), xi[1], xi[2]), y2};
    }
    case SliceFamily::HeightTwo: {
      const double p = pr[0];
      if (p != 0.0) {
        const S s2 = xi[0], c2 = xi[1], d2 = -xi[2];
        const Qs y2(s2, S(0), c2, d2);
        const Qs Q = iconj(y2);
        const S a = -(2.0 * s2 + p * Q.x) / (2.0 * p);
        const S d1 = (p * Q.y - 2.0 * d2) / (2.0 * p);
        const S c1 = -(2.0 * c2 + p * Q.z) / (2.0 * p);
        if (margin) *margin = val(s2) / p - val(xi[1] * xi[1] + xi[2] * xi[2]);
        return {one, Qs(a, xi[3], c1, d1), y2};
      }
      if (margin) *margin = -val(xi[0]);
      return {one, Qs(xi[0], xi[1], xi[2], xi[3]), Qs(S(0))};
    }
    case SliceFamily::Bergman: {
      const S a = xi[0], b = xi[1], cc = xi[2], d = xi[3];
      const S z2sq = a * a + b * b, w2sq = cc * cc + d * d;
      const S B = 1.0 - z2sq + w2sq;
      const S s = (B + sqrt(B * B + 4.0 * w2sq * z2sq)) / 2.0;
      const S w1 = sqrt(s);
      // conj(w2) z2 / w1
      const S zr = (cc * a + d * b) / w1, zi = (cc * b - d * a) / w1;
      if (margin) *margin = val(s) - val(w2sq);
      return {one, Qs(zr, zi, w1, S(0)), Qs(a, b, cc, d)};
    }
  }
  return {one, Qs(S(0)), Qs(S(0))};
}

template <typename S>
HVec3<S> u_point(const QuotientChart& c, const Eigen::Matrix<S, 4, 1>& xi, double* margin) {
  HVec3<S> v = native_point(c, xi, margin);
  if (c.moment_family == MomentFamily::Weighted || c.moment_family == MomentFamily::Bergman) return v;
  return act(basis_matrix_inverse(), v);
}

double region_margin(const QuotientChart& c, const HVec3<double>& u) {
  HVector h{c.k, c.l, {u[0], u[1], u[2]}, Basis::U};
  double n2 = 0;
  for (const auto& q : u) n2 += q.norm2();
  return -form_value(h) / n2;
}

}  // namespace

QuotientChart make_chart(SliceFamily f, const std::vector<double>& pr) {
  QuotientChart c;
  c.family = f;
  c.params = pr;
  auto need = [&](std::size_t n) {
    if (pr.size() != n) throw Error(ErrorKind::Parameter, to_string(f) + " takes " + std::to_string(n) + " parameters");
  };
  switch (f) {
    case SliceFamily::PL: {
      need(3);
      c.moment_family = MomentFamily::Weighted;
      WeightTriple w = WeightTriple::make(int(pr[0]), int(pr[1]), int(pr[2]));
      if (w.p0 != pr[0] || w.p1 != pr[1] || w.p2 != pr[2]) throw Error(ErrorKind::Parameter, "PL weights must be integers");
      if (!zeroset_nonempty(w)) throw Error(ErrorKind::Degenerate, "zero set empty: max(|p1/p0|,|p2/p0|) <= 1");
      if (!action_free(w)) throw Error(ErrorKind::Degenerate, "circle action is not free on the zero set (orbifold quotient)");
      c.center = {0.2, 0.1, 0.02, 0.0};
      c.halfwidth = Eigen::Vector4d::Constant(0.04);
      break;
    }
    case SliceFamily::GenPedersen:
      need(2);
      c.moment_family = MomentFamily::GenPedersen;
      c.center = {0.2, 0.1, -0.1, 0.15};
      c.halfwidth = Eigen::Vector4d::Constant(0.1);
      break;
    case SliceFamily::HeightOne: {
      need(2);
      c.moment_family = MomentFamily::HeightOne;
      const double p = pr[0], q = pr[1];
      if (p >= std::abs(q)) throw Error(ErrorKind::Degenerate, "zero set empty: p >= |q|");
      if (p != 0.0) {
        c.center = {0.2, 0.1, 0.1, 0.2};
        c.halfwidth = Eigen::Vector4d::Constant(0.1);
        if (p > 0) {
          // exterior of a hyperboloid: move out along the negative direction
          const bool zneg = p - q < 0;
          const double r = std::sqrt(2.0 / std::abs(zneg ? p - q : p + q));
          c.center = zneg ? Eigen::Vector4d(r, 0.1, 0.1, 0.1) : Eigen::Vector4d(0.1, 0.1, r, 0.1);
        }
      } else {
        c.center = {-1.0 / std::abs(q) - 0.5, 0.0, 0.0, 0.4};
        c.halfwidth = {0.2, 0.2, 0.2, 0.2};
      }
      break;
    }
    case SliceFamily::HeightTwo:
      need(1);
      c.moment_family = MomentFamily::HeightTwo;
      if (pr[0] != 0.0) {
        c.center = {0.5 * (pr[0] > 0 ? 1 : -1), 0.0, 0.0, 0.0};
        c.halfwidth = {0.1, 0.2, 0.2, 0.2};
      } else {
        c.center = {-1.0, 0.0, 0.0, 0.0};
        c.halfwidth = {0.2, 0.2, 0.2, 0.2};
      }
      break;
    case SliceFamily::Bergman:
      need(3);
      if (pr[0] != 1 || pr[1] != 1 || pr[2] != 1)
        throw Error(ErrorKind::Parameter, "the Bergman gauge section is implemented for p = (1,1,1) only");
      c.moment_family = MomentFamily::Bergman;
      c.k = 2;
      c.l = 1;
      c.center = {0.2, 0.1, 0.1, 0.05};
      c.halfwidth = Eigen::Vector4d::Constant(0.1);
      break;
  }
  c.generator = family_generator(c.moment_family, pr).Mu();
  return c;
}

bool in_domain(const QuotientChart& c, const Eigen::Vector4d& xi, std::string* why) {
  double margin = 0;
  HVec3<double> u;
  try {
    u = u_point<double>(c, xi, &margin);
  } catch (const Error&) {
    margin = -1;
  }
  if (!(margin > 0)) {
    if (why) *why = "slice inequality of " + c.name() + " violated";
    return false;
  }
  if (!(region_margin(c, u) > 0)) {
    if (why) *why = "point is not in the negative region";
    return false;
  }
  return true;
}

EmbedJet embed_jet(const QuotientChart& c, const Eigen::Vector4d& xi) {
  Eigen::Matrix<AD, 4, 1> x;
  for (int i = 0; i < 4; ++i) x[i] = AD(xi[i], 4, i);
  auto u = u_point<AD>(c, x, nullptr);
  EmbedJet j;
  for (int r = 0; r < 3; ++r) {
    j.u[r] = Quat(u[r].w.value(), u[r].x.value(), u[r].y.value(), u[r].z.value());
    for (int a = 0; a < 4; ++a)
      j.du[a][r] = Quat(u[r].w.derivatives()[a], u[r].x.derivatives()[a], u[r].y.derivatives()[a],
                        u[r].z.derivatives()[a]);
  }
  return j;
}

HVector embed_u(const QuotientChart& c, const Eigen::Vector4d& xi) {
  std::string why;
  if (!in_domain(c, xi, &why)) throw Error(ErrorKind::Domain, why);
  auto u = u_point<double>(c, xi, nullptr);
  return {c.k, c.l, {u[0], u[1], u[2]}, Basis::U};
}

ChartPoint embed(const QuotientChart& c, const Eigen::Vector4d& xi) { return to_chart(embed_u(c, xi), 0); }

ChartPoint embed_native(const QuotientChart& c, const Eigen::Vector4d& xi) {
  std::string why;
  if (!in_domain(c, xi, &why)) throw Error(ErrorKind::Domain, why);
  auto v = native_point<double>(c, xi, nullptr);
  const bool tilde = !(c.moment_family == MomentFamily::Weighted || c.moment_family == MomentFamily::Bergman);
  return {c.k, c.l, 0, {v[1], v[2]}, tilde ? Basis::VTilde : Basis::U};
}

namespace {

// x_a = u_a u0^{-1}; derivative along du
Tangent chart_derivative(const HVec3<double>& u, const HVec3<double>& du) {
  const Quat inv = u[0].inverse();
  Tangent t(2);
  for (int a = 1; a < 3; ++a) t[a - 1] = du[a] * inv - u[a] * inv * du[0] * inv;
  return t;
}

}  // namespace

SliceFrame slice_frame(const QuotientChart& c, const Eigen::Vector4d& xi) {
  std::string why;
  if (!in_domain(c, xi, &why)) throw Error(ErrorKind::Domain, why);
  EmbedJet j = embed_jet(c, xi);
  SliceFrame f;
  f.x = to_chart(HVector{c.k, c.l, {j.u[0], j.u[1], j.u[2]}, Basis::U}, 0);
  for (int a = 0; a < 4; ++a) f.t[a] = chart_derivative(j.u, j.du[a]);
  f.V = chart_derivative(j.u, act(c.generator, j.u));
  return f;
}

ChartPoint slice_gen_pedersen(double p, double q, const Quat& y2) {
  if (!(y2.norm2() < 1.0)) throw Error(ErrorKind::Domain, "|y2| < 1 violated");
  QuotientChart c;
  c.family = SliceFamily::GenPedersen;
  c.params = {p, q};
  c.moment_family = MomentFamily::GenPedersen;
  return embed_native(c, y2.coeffs());
}

ChartPoint slice_height_one(double p, double q, std::complex<double> z2, std::complex<double> w2) {
  if (p == 0.0) throw Error(ErrorKind::Parameter, "use slice_height_one_p0 for p = 0");
  QuotientChart c;
  c.family = SliceFamily::HeightOne;
  c.params = {p, q};
  c.moment_family = MomentFamily::HeightOne;
  Eigen::Vector4d xi(z2.real(), z2.imag(), w2.real(), w2.imag());
  std::string why;
  if (!in_domain(c, xi, &why)) {
    const char* ineq = p > 0 ? "(p-q)|z2|^2 + (p+q)|w2|^2 < -1" : "(p-q)|z2|^2 + (p+q)|w2|^2 > -1";
    throw Error(ErrorKind::Domain, std::string(ineq) + " violated");
  }
  return embed_native(c, xi);
}

ChartPoint slice_height_one_p0(double q, double a, double cc, double d, double s) {
  if (q == 0.0) throw Error(ErrorKind::Degenerate, "zero set empty for p = q = 0");
  QuotientChart c;
  c.family = SliceFamily::HeightOne;
  c.params = {0.0, q};
  c.moment_family = MomentFamily::HeightOne;
  Eigen::Vector4d xi(a, cc, d, s);
  if (!in_domain(c, xi)) throw Error(ErrorKind::Domain, "y1 + conj(y1) < -1/|q| violated");
  return embed_native(c, xi);
}

ChartPoint slice_height_two(double p, double s2, std::complex<double> w2, double r) {
  if (p == 0.0) throw Error(ErrorKind::Parameter, "use slice_height_two_p0 for p = 0");
  QuotientChart c;
  c.family = SliceFamily::HeightTwo;
  c.params = {p};
  c.moment_family = MomentFamily::HeightTwo;
  Eigen::Vector4d xi(s2, w2.real(), w2.imag(), r);
  if (!in_domain(c, xi)) throw Error(ErrorKind::Domain, "paraboloid s2/p > |w2|^2 violated");
  return embed_native(c, xi);
}

ChartPoint slice_height_two_p0(const Quat& y1) {
  QuotientChart c;
  c.family = SliceFamily::HeightTwo;
  c.params = {0.0};
  c.moment_family = MomentFamily::HeightTwo;
  if (!in_domain(c, y1.coeffs())) throw Error(ErrorKind::Domain, "Re y1 < 0 violated");
  return embed_native(c, y1.coeffs());
}

ChartPoint slice_pl(const WeightTriple& p, std::complex<double> z2, std::complex<double> alpha,
                    std::complex<double> phase) {
  QuotientChart c;
  c.family = SliceFamily::PL;
  c.params = {double(p.p0), double(p.p1), double(p.p2)};
  c.moment_family = MomentFamily::Weighted;
  Eigen::Vector4d xi(z2.real(), z2.imag(), alpha.real(), alpha.imag());
  double margin = 0;
  auto u = native_point<double>(c, xi, &margin);
  const double al2 = std::norm(alpha);
  if (!(p.p1 * p.p1 * p.p2 * al2 < 1.0)) throw Error(ErrorKind::Domain, "|alpha|^2 < 1/(p1^2 p2) violated");
  const double z1sq = (double(p.p0) / p.p1) / (1.0 - p.p1 * p.p2 * al2) - (double(p.p2) / p.p1) * std::norm(z2);
  if (!(z1sq > 0)) throw Error(ErrorKind::Internal, "|z1|^2 <= 0 inside the slice");
  if (!(margin > 0)) throw Error(ErrorKind::Domain, "f_p(z2, alpha) < 0 violated");
  // rotate z1 by the phase; w2 = alpha p1 conj(z1)
  const std::complex<double> z1 = std::sqrt(z1sq) * phase;
  const std::complex<double> w2 = alpha * double(p.p1) * std::conj(z1);
  const std::complex<double> w1 = -alpha * double(p.p2) * std::conj(z2);
  (void)u;
  return {1, 2, 0, {zw(z1, w1), zw(z2, w2)}, Basis::U};
}

ChartPoint slice_bergman(const WeightTriple& p, const Eigen::Vector4d& xi) {
  QuotientChart c = make_chart(SliceFamily::Bergman, {double(p.p0), double(p.p1), double(p.p2)});
  std::string why;
  if (!in_domain(c, xi, &why)) throw Error(ErrorKind::Domain, why);
  return embed_native(c, xi);
}

Tangent killing_field(const HMatrix3& M, const ChartPoint& p) {
  if (p.chart != 0) throw Error(ErrorKind::Contract, "Killing fields are evaluated in the chart u0 != 0");
  HVector v = from_chart(p);
  HVector dv = act(M, v);
  HVec3<double> a{v.c[0], v.c[1], v.c[2]}, da{dv.c[0], dv.c[1], dv.c[2]};
  return chart_derivative(a, da);
}

Tangent killing_field(const Sp12Element& Y, const ChartPoint& p) {
  return killing_field(p.basis == Basis::U ? Y.Y : to_vtilde(Y.Y), p);
}

}  // namespace qkq
