#include "qkq/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace qkq {

namespace {

using cd = std::complex<double>;

// Jordan blocks of size 3 split eigenvalues by ~eps^(1/3) ~ 5e-6 relative, so
// clusters are joined at a coarser tolerance than the nominal 1e-7.
constexpr double kJoinTol = 2e-5;
constexpr double kGapTol = 2e-4;
constexpr double kHeightTol = 1e-6;

std::string fmt(double v) {
  if (std::abs(v) < 5e-13) v = 0;
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

Quat ci(double v) { return {0.0, v, 0.0, 0.0}; }

double scale_of(const Matrix6c& M) { return std::max(1.0, M.norm()); }

}  // namespace

GeneratorForm GeneratorForm::t0diag(double p0, double p1, double p2) {
  GeneratorForm f;
  f.family = Family::T0Diag;
  f.weights = {p0, p1, p2};
  return f;
}

GeneratorForm GeneratorForm::t0split(double lambda, double p, double q, Basis b) {
  GeneratorForm f;
  f.family = Family::T0Split;
  f.basis = b;
  f.lambda = lambda;
  f.p = p;
  f.q = q;
  return f;
}

GeneratorForm GeneratorForm::t1(double lambda, double p, double q, Basis b) {
  GeneratorForm f = t0split(lambda, p, q, b);
  f.family = Family::T1;
  return f;
}

GeneratorForm GeneratorForm::t2(double lambda, double p, Basis b) {
  GeneratorForm f = t0split(lambda, p, 0.0, b);
  f.family = Family::T2;
  return f;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::T0Diag: return "T0Diag";
    case Family::T0Split: return "T0Split";
    case Family::T1: return "T1";
    case Family::T2: return "T2";
  }
  return "?";
}

std::string to_string(const GeneratorForm& f) {
  std::string s = to_string(f.family);
  if (f.basis == Basis::VTilde) s = "~" + s;
  switch (f.family) {
    case Family::T0Diag:
      return s + "(" + fmt(f.weights[0]) + "," + fmt(f.weights[1]) + "," + fmt(f.weights[2]) + ")";
    case Family::T0Split:
      return s + "(" + fmt(f.lambda) + "," + fmt(f.p) + "," + fmt(f.q) + ")";
    case Family::T1:
      return s + "(" + (f.sign_resolved ? fmt(f.lambda) : std::string("unresolved")) + "," + fmt(f.p) + "," + fmt(f.q) + ")";
    case Family::T2:
      return s + "(" + fmt(f.lambda) + "," + fmt(f.p) + ")";
  }
  return s;
}

static void check_lambda(const GeneratorForm& f) {
  if (f.family != Family::T0Diag && f.lambda == 0.0)
    throw Error(ErrorKind::Parameter, to_string(f.family) + " needs lambda != 0");
}

HMatrix3 normal_form_matrix(const GeneratorForm& f) {
  check_lambda(f);
  const double l = f.lambda, p = f.p, q = f.q;
  HMatrix3 T;
  switch (f.family) {
    case Family::T0Diag:
      return HMatrix3::Diagonal(ci(f.weights[0]), ci(f.weights[1]), ci(f.weights[2]));
    case Family::T0Split:
      if (f.basis == Basis::U) {
        T = HMatrix3::Diagonal(ci(p), ci(p), ci(q));
        T(0, 1) = Quat(l);
        T(1, 0) = Quat(l);
      } else {
        T = HMatrix3::Diagonal(Quat(l, p), Quat(-l, p), ci(q));
      }
      return T;
    case Family::T1:
      if (f.basis == Basis::U) {
        T = HMatrix3::Diagonal(ci(p + l), ci(p - l), ci(q));
        T(0, 1) = ci(l);
        T(1, 0) = ci(-l);
      } else {
        T = HMatrix3::Diagonal(ci(p), ci(p), ci(q));
        T(1, 0) = ci(-l);
      }
      return T;
    case Family::T2:
      T = HMatrix3::Diagonal(ci(p), ci(p), ci(p));
      if (f.basis == Basis::U) {
        T(0, 2) = ci(-l);
        T(1, 2) = ci(l);
        T(2, 0) = ci(l);
        T(2, 1) = ci(l);
      } else {
        T(1, 2) = ci(l);
        T(2, 0) = ci(l);
      }
      return T;
  }
  return T;
}

HMatrix3 exp_normal_form(const GeneratorForm& f, double t) {
  check_lambda(f);
  const double l = f.lambda, p = f.p, q = f.q;
  auto e = [](double th) { return exp_i(th); };
  switch (f.family) {
    case Family::T0Diag:
      return HMatrix3::Diagonal(e(f.weights[0] * t), e(f.weights[1] * t), e(f.weights[2] * t));
    case Family::T0Split:
      if (f.basis == Basis::U) return tpl_exp(p, p, q, l, t);
      return HMatrix3::Diagonal(std::exp(l * t) * e(p * t), std::exp(-l * t) * e(p * t), e(q * t));
    case Family::T1: {
      // e^{ipt}(I + t N) with N^2 = 0 on the first block
      HMatrix3 N;
      if (f.basis == Basis::U) {
        N(0, 0) = ci(l);
        N(0, 1) = ci(l);
        N(1, 0) = ci(-l);
        N(1, 1) = ci(-l);
      } else {
        N(1, 0) = ci(-l);
      }
      HMatrix3 A = HMatrix3::Identity() + t * N;
      A = HMatrix3::Diagonal(e(p * t), e(p * t), Quat(1)) * A;
      A(2, 2) = e(q * t);
      return A;
    }
    case Family::T2: {
      HMatrix3 M = normal_form_matrix(f) - HMatrix3::Diagonal(ci(p), ci(p), ci(p));
      HMatrix3 A = HMatrix3::Identity() + t * M + (0.5 * t * t) * (M * M);
      return HMatrix3::Diagonal(e(p * t), e(p * t), e(p * t)) * A;
    }
  }
  return HMatrix3::Identity();
}

std::vector<SpectralCluster> spectral_clusters(const Matrix6c& Y6) {
  Eigen::ComplexEigenSolver<Matrix6c> es(Y6, false);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::Internal, "eigenvalue solver failed");
  const Eigen::Matrix<cd, 6, 1> ev = es.eigenvalues();
  const double scale = scale_of(Y6);

  // single-linkage clustering
  std::vector<int> label(6);
  std::iota(label.begin(), label.end(), 0);
  std::function<int(int)> root = [&](int i) { return label[i] == i ? i : label[i] = root(label[i]); };
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if (std::abs(ev[i] - ev[j]) < kJoinTol * scale) label[root(i)] = root(j);

  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < 6; ++i) groups[root(i)].push_back(i);

  std::vector<SpectralCluster> out;
  for (const auto& [r, idx] : groups) {
    SpectralCluster c;
    c.multiplicity = static_cast<int>(idx.size());
    cd sum = 0;
    for (int i : idx) sum += ev[i];
    c.value = sum / double(c.multiplicity);
    // nearly-real or nearly-imaginary means are snapped
    if (std::abs(c.value.real()) < 1e-12 * scale) c.value.real(0.0);
    if (std::abs(c.value.imag()) < 1e-12 * scale) c.value.imag(0.0);
    Matrix6c K = Matrix6c::Identity();
    const Matrix6c D = Y6 - c.value * Matrix6c::Identity();
    for (int m = 0; m < c.multiplicity; ++m) K = K * D;
    Eigen::JacobiSVD<Matrix6c> svd(K, Eigen::ComputeFullV);
    c.basis = svd.matrixV().rightCols(c.multiplicity);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const SpectralCluster& a, const SpectralCluster& b) {
    if (a.value.imag() != b.value.imag()) return a.value.imag() < b.value.imag();
    return a.value.real() < b.value.real();
  });

  double gap = INFINITY;
  for (std::size_t a = 0; a < out.size(); ++a)
    for (std::size_t b = a + 1; b < out.size(); ++b) gap = std::min(gap, std::abs(out[a].value - out[b].value));
  if (gap < kGapTol * scale) {
    std::ostringstream os;
    os << "eigenvalue clusters separated by " << gap << " (relative " << gap / scale << ")";
    throw Error(ErrorKind::IllConditioned, os.str());
  }
  return out;
}

Decomposition decompose(const HMatrix3& Yu) {
  if (!is_sp12(Yu, 1e-10)) throw Error(ErrorKind::Contract, "matrix is not in sp(1,2)");
  const Matrix6c Y6 = complexify(Yu);
  const double scale = scale_of(Y6);
  auto clusters = spectral_clusters(Y6);
  Matrix6c B;
  Eigen::Matrix<cd, 6, 1> d;
  int col = 0;
  for (const auto& c : clusters) {
    B.middleCols(col, c.multiplicity) = c.basis;
    d.segment(col, c.multiplicity).setConstant(c.value);
    col += c.multiplicity;
  }
  const Matrix6c S6 = B * d.asDiagonal() * B.inverse();
  const Matrix6c N6 = Y6 - S6;

  Decomposition out;
  out.S = dequaternify(S6);
  out.N = Yu - out.S;
  Matrix6c P = N6;
  out.height = 0;
  for (int k = 1; k <= 3; ++k) {
    if (P.norm() < kHeightTol * std::pow(scale, k)) break;
    out.height = k;
    P = P * N6;
  }
  if (out.height == 3) throw Error(ErrorKind::Internal, "nilpotent part did not vanish at power 3");
  if (out.height > 0 && N6.norm() < 1e-4 * scale)
    throw Error(ErrorKind::IllConditioned, "nilpotent part below resolution");
  return out;
}

Sp12Element make_element(const HMatrix3& Y, Basis b) {
  HMatrix3 Yu = b == Basis::U ? Y : to_u(Y);
  if (!is_sp12(Yu, 1e-10)) throw Error(ErrorKind::Contract, "matrix is not in sp(1,2)");
  Sp12Element e;
  e.Y = Yu;
  e.Y6 = complexify(Yu);
  auto d = decompose(Yu);
  e.S = d.S;
  e.N = d.N;
  e.height = d.height;
  return e;
}

Sp12Element make_normal_form(const GeneratorForm& f) { return make_element(normal_form_matrix(f), f.basis); }

namespace {

struct QWeight {
  double mu;
  int copies;
  SpectralCluster const* cluster;
};

// One entry per cluster with Im >= 0; multiplicity counted in quaternionic dimensions.
std::vector<QWeight> upper_weights(const std::vector<SpectralCluster>& cs, double tol) {
  std::vector<QWeight> w;
  for (const auto& c : cs) {
    if (c.value.imag() > tol) w.push_back({c.value.imag(), c.multiplicity, &c});
    else if (std::abs(c.value.imag()) <= tol) w.push_back({0.0, c.multiplicity / 2, &c});
  }
  return w;
}

bool exact_t1(const HMatrix3& Y, double& lambda, double& p, double& q) {
  lambda = Y(0, 1).x;
  p = Y(0, 0).x - lambda;
  q = Y(2, 2).x;
  if (lambda == 0.0) return false;
  HMatrix3 T = normal_form_matrix(GeneratorForm::t1(lambda, p, q));
  return max_abs_diff(T, Y) < 1e-9 * std::max(1.0, norm(Y));
}

}  // namespace

GeneratorForm classify(const Sp12Element& Y) {
  const double scale = scale_of(Y.Y6);
  if (norm(Y.Y) == 0.0) throw Error(ErrorKind::Degenerate, "zero generator");
  const auto clusters = spectral_clusters(Y.Y6);
  const double tol = kJoinTol * scale;

  if (Y.height == 0) {
    for (const auto& c : clusters)
      if (std::abs(c.value.real()) > tol) {
        double q = 0;
        for (const auto& o : clusters)
          if (std::abs(o.value.real()) <= tol) q = std::abs(o.value.imag());
        return GeneratorForm::t0split(std::abs(c.value.real()), std::abs(c.value.imag()), q);
      }
    const Matrix6c F6 = complexify(form_matrix_u());
    std::vector<double> neg, pos;
    for (const auto& w : upper_weights(clusters, tol)) {
      Eigen::MatrixXcd H = w.cluster->basis.adjoint() * F6 * w.cluster->basis;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
      int nneg = 0, npos = 0;
      for (int i = 0; i < es.eigenvalues().size(); ++i) (es.eigenvalues()[i] < 0 ? nneg : npos)++;
      if (w.mu == 0.0) {
        nneg /= 2;
        npos /= 2;
      }
      neg.insert(neg.end(), nneg, w.mu);
      pos.insert(pos.end(), npos, w.mu);
    }
    if (neg.size() != 1 || pos.size() != 2) throw Error(ErrorKind::IllConditioned, "Krein signature count inconsistent");
    std::sort(pos.begin(), pos.end());
    return GeneratorForm::t0diag(neg[0], pos[0], pos[1]);
  }

  if (Y.height == 2) {
    double mu = 0;
    for (const auto& c : clusters) mu = std::max(mu, std::abs(c.value.imag()));
    return GeneratorForm::t2(1.0, mu);
  }

  // height one
  const Matrix6c N6 = complexify(Y.N);
  double p = -1, q = -1;
  auto ws = upper_weights(clusters, tol);
  std::vector<double> rest;
  for (const auto& w : ws) {
    int copies = w.copies;
    if (p < 0 && (N6 * w.cluster->basis).norm() > 1e-6 * scale && copies >= 2) {
      p = w.mu;
      copies -= 2;
    }
    rest.insert(rest.end(), copies, w.mu);
  }
  if (p < 0 || rest.size() != 1) throw Error(ErrorKind::IllConditioned, "height-one spectrum does not match T1");
  q = rest[0];

  GeneratorForm f = GeneratorForm::t1(1.0, p, q);
  double l0, p0, q0;
  if (p > tol) {
    if (exact_t1(Y.Y, l0, p0, q0)) {
      f.lambda = (l0 > 0) == (p0 > 0) ? 1.0 : -1.0;
    } else {
      f.sign_resolved = false;
    }
  }
  return f;
}

std::string to_string(BryantId id) {
  switch (id) {
    case BryantId::Case1: return "Case 1";
    case BryantId::Case2: return "Case 2";
    case BryantId::Case3: return "Case 3";
    case BryantId::Case4: return "Case 4";
    case BryantId::CohomOne: return "cohomogeneity one";
    case BryantId::Homogeneous: return "homogeneous";
    case BryantId::Exceptional: return "Exceptional";
  }
  return "?";
}

namespace {

struct Block {
  cd root;
  int size;
};

bool same(cd a, cd b) { return std::abs(a - b) < 1e-9; }

BryantCase polys(const std::vector<Block>& blocks) {
  BryantCase c;
  std::vector<std::pair<cd, int>> maxblk;
  for (const auto& b : blocks) {
    c.Pc.insert(c.Pc.end(), b.size, b.root);
    auto it = std::find_if(maxblk.begin(), maxblk.end(), [&](auto& m) { return same(m.first, b.root); });
    if (it == maxblk.end()) maxblk.push_back({b.root, b.size});
    else it->second = std::max(it->second, b.size);
  }
  for (auto& [r, s] : maxblk) c.Pm.insert(c.Pm.end(), s, r);
  return c;
}

std::vector<int> multiplicity_pattern(const std::vector<cd>& roots) {
  std::vector<int> pat;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    int m = 0;
    for (std::size_t j = i; j < roots.size(); ++j)
      if (!used[j] && same(roots[i], roots[j])) {
        used[j] = true;
        ++m;
      }
    pat.push_back(m);
  }
  std::sort(pat.rbegin(), pat.rend());
  return pat;
}

bool zero(double v) { return std::abs(v) < 1e-9; }

}  // namespace

BryantCase bryant_case(const GeneratorForm& f) {
  BryantCase c;
  switch (f.family) {
    case Family::T0Diag: {
      const double p0 = f.weights[0], p1 = f.weights[1], p2 = f.weights[2];
      const double r0 = 0.5 * (p0 - p1 - p2);
      c = polys({{r0, 1}, {p0 - r0, 1}, {-p1 - r0, 1}, {-p2 - r0, 1}});
      auto pat = multiplicity_pattern(c.Pc);
      if (zero(p0) || zero(p1) || zero(p2)) c.id = BryantId::Exceptional;
      else if (pat.size() == 4) c.id = BryantId::Case4;
      else if (pat == std::vector<int>{2, 1, 1}) c.id = BryantId::CohomOne;
      else if (pat == std::vector<int>{3, 1}) c.id = BryantId::Homogeneous;
      else c.id = BryantId::Exceptional;
      return c;
    }
    case Family::T0Split: {
      const double r = -0.5 * f.q, l = std::abs(f.lambda);
      c = polys({{f.p + 0.5 * f.q, 1}, {0.5 * f.q - f.p, 1}, {cd(r, l), 1}, {cd(r, -l), 1}});
      c.id = zero(f.q) ? BryantId::Exceptional : zero(f.p) ? BryantId::CohomOne : BryantId::Case1;
      return c;
    }
    case Family::T1: {
      const double r = -0.5 * f.q;
      c = polys({{f.p + 0.5 * f.q, 1}, {0.5 * f.q - f.p, 1}, {r, 2}});
      if (zero(f.q)) c.id = BryantId::Exceptional;
      else if (zero(f.p) || zero(std::abs(f.p) - std::abs(f.q))) c.id = BryantId::CohomOne;
      else c.id = BryantId::Case3;
      return c;
    }
    case Family::T2: {
      const double r = -0.5 * f.p;
      c = polys({{1.5 * f.p, 1}, {r, 3}});
      c.id = zero(f.p) ? BryantId::Exceptional : BryantId::Case2;
      return c;
    }
  }
  return c;
}

bool divides(const std::vector<cd>& pm, const std::vector<cd>& pc, double tol) {
  std::vector<bool> used(pc.size(), false);
  for (const auto& r : pm) {
    bool found = false;
    for (std::size_t j = 0; j < pc.size() && !found; ++j)
      if (!used[j] && std::abs(pc[j] - r) < tol) used[j] = found = true;
    if (!found) return false;
  }
  return true;
}

HMatrix3 random_sp12_generator(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  auto rq = [&] { return Quat(nd(rng), nd(rng), nd(rng), nd(rng)); };
  HMatrix3 K;
  for (int r = 0; r < 3; ++r) {
    K(r, r) = Quat(0, nd(rng), nd(rng), nd(rng));
    for (int c = r + 1; c < 3; ++c) {
      K(r, c) = rq();
      K(c, r) = -K(r, c).conj();
    }
  }
  return form_matrix_u() * K;
}

HMatrix3 random_group_element(std::mt19937_64& rng, int factors, double scale) {
  HMatrix3 g = HMatrix3::Identity();
  for (int i = 0; i < factors; ++i) g = g * mat_exp(random_sp12_generator(rng, scale), 1.0);
  return g;
}

HMatrix3 group_inverse(const HMatrix3& g) {
  const HMatrix3 F = form_matrix_u();
  return F * adjoint(g) * F;
}

}  // namespace qkq
