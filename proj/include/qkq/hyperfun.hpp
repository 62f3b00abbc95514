#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qkq/hnum.hpp"

namespace qkq {

struct HalfPlanePoint {
  double rho = 1;
  double eta = 0;
};

// sqrt(a^2 rho^2 + (a eta - b)^2) / sqrt(rho), signed by charge
struct RealPole {
  double a = 1, b = 0;
  int charge = 1;
};
// a/sqrt(rho) + Re((b + ic) sqrt(rho^2 + (eta + i)^2)) / sqrt(rho)
struct ComplexPair {
  double a = 0, b = 1, c = 0;
};

struct PoleSet {
  std::vector<RealPole> real_poles;
  std::optional<ComplexPair> complex_pair;
  double dipole = 0;
  double tripole = 0;  // coefficient c of (c/2) rho^{3/2} / (rho^2 + eta^2)^{3/2}

  static PoleSet monopole(double a, double b, int charge = 1);
  static PoleSet pedersen(double a, double b, double c);
  static PoleSet pure_dipole(double c = 1);
  static PoleSet pure_tripole(double c = 1);
  bool empty() const;
  std::string describe() const;
};

struct GramPair {
  ImQuaternion x1, x2;
};

Eigen::Matrix2d grammian(const GramPair& g);
HalfPlanePoint halfplane_from_gram(const Eigen::Matrix2d& A);
Eigen::Matrix2d gram_from_halfplane(const HalfPlanePoint& p);

double eval_F(const PoleSet& poles, const HalfPlanePoint& p);
// F lifted to positive 2x2 matrices with homogeneity 1/2
double eval_F_lifted(const PoleSet& poles, const Eigen::Matrix2d& A);
double laplace_check(const PoleSet& poles, const HalfPlanePoint& p);
// Distance to the pole boundary points, the branch locus and rho = 0.
double singular_distance(const PoleSet& poles, const HalfPlanePoint& p);

enum class TorusFamily { Diagonal, HeightOne, HeightTwo };
std::string to_string(TorusFamily f);
TorusFamily torus_family_from_string(const std::string& s);

std::array<ImQuaternion, 3> torus_moment_coords(TorusFamily f, const HVector& u);
double quadratic_in_moments(TorusFamily f, const std::array<ImQuaternion, 3>& y);

// y_j = sign_j (-b_j x1 + a_j x2) on the zero set of the generator
struct KernelBasis {
  std::array<double, 3> a{}, b{};
  std::array<int, 3> sign{1, 1, 1};
};
KernelBasis kernel_basis(TorusFamily f, const std::vector<double>& params);
// HeightTwo also accepts the two coefficients (a0, a1) directly.
PoleSet eigenfunction_of_quotient(TorusFamily f, const std::vector<double>& params);
PoleSet eigenfunction_from_basis(TorusFamily f, const KernelBasis& kb);

struct PullbackResult {
  double deviation = 0;  // max |ratio - mean| / |mean|
  double mean_ratio = 0;
  double max_lsq_residual = 0;
  int used = 0;
  int skipped = 0;
};
GramPair recover_x(const KernelBasis& kb, const std::array<ImQuaternion, 3>& y, double* residual = nullptr);
PullbackResult pullback_check(TorusFamily f, const std::vector<double>& params, const std::vector<HVector>& samples,
                              const KernelBasis* basis = nullptr);

// The generator family whose zero set the pullback samples live on.
std::string moment_family_name(TorusFamily f);

}  // namespace qkq
