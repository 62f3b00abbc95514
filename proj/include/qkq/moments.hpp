#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qkq/orbits.hpp"

namespace qkq {

struct MomentValue {
  ImQuaternion value = ImQuaternion::Zero();
  double norm() const { return value.norm(); }
};

struct WeightTriple {
  int p0 = 1, p1 = 1, p2 = 1;

  static WeightTriple make(int p0, int p1, int p2);  // enforces gcd = 1
  bool all_odd() const { return (p0 & 1) && (p1 & 1) && (p2 & 1); }
  int effective_divisor() const { return all_odd() ? 2 : 1; }
  std::array<int, 3> array() const { return {p0, p1, p2}; }
};

enum class MomentFamily { Weighted, GenPedersen, HeightOne, HeightTwo, Bergman };
std::string to_string(MomentFamily f);
MomentFamily moment_family_from_string(const std::string& s);

// Generator of a family in its native basis, together with the ambient signature.
struct FamilyGenerator {
  HMatrix3 M;
  Basis basis = Basis::U;
  int k = 1, l = 2;
  HMatrix3 Mu() const { return basis == Basis::U ? M : to_u(M); }
};
FamilyGenerator family_generator(MomentFamily f, const std::vector<double>& params);

// u^dagger F M u with the form of u's basis and signature
MomentValue mu_raw(const HMatrix3& M, const HVector& u);
MomentValue mu_general(const Sp12Element& T, const HVector& u);

// Closed inhomogeneous formulas in the family's native chart (u0 = 1 or v0 = 1).
MomentValue f_inhomog(MomentFamily f, const std::vector<double>& params, const ChartPoint& y);

bool zeroset_nonempty(const WeightTriple& p);
bool action_free(const WeightTriple& p);

enum class Smoothness { Smooth, Orbifold };
struct BergmanVerdict {
  Smoothness verdict = Smoothness::Smooth;
  int witness_order = 1;  // closed-form order on the witness circle
  int direct_order = 1;   // gcd of the circle weights on the same locus
  std::string locus;
};
BergmanVerdict bergman_smooth(const WeightTriple& p);

struct SampleOptions {
  int count = 1;
  int max_starts = 200;
  int max_iter = 50;
  double tol = 1e-12;
  double region_margin = 1e-3;  // 1 - |x|^2 (or its indefinite analogue) must exceed this
  std::array<bool, 8> mask{true, true, true, true, true, true, true, true};  // active real coords of (x1, x2)
};

// Gauss-Newton search for u (u-basis, u0 = 1) with mu(u) = 0 in the Minus region.
std::vector<HVector> zeroset_search(const HMatrix3& Yu, int k, int l, std::uint64_t seed, const SampleOptions& opt);
// Same, for a named family; returned vectors are in the family's native basis.
std::vector<HVector> zeroset_sample(MomentFamily f, const std::vector<double>& params, std::uint64_t seed,
                                    const SampleOptions& opt = {});

// Freeness by exhaustive search over coordinate supports of (z1, w1, z2, w2).
struct SupportIsotropy {
  std::array<bool, 4> support{};
  int order = 1;  // 0 when the whole circle fixes the locus
};
std::vector<SupportIsotropy> realized_supports(const WeightTriple& p, std::uint64_t seed, int starts = 40);
bool action_free_numeric(const WeightTriple& p, std::uint64_t seed);

}  // namespace qkq
