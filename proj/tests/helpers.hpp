#pragma once

#include <random>

#include "qkq/hnum.hpp"

namespace qkq::test {

inline Quat random_quat(std::mt19937_64& rng, double s = 1.0) {
  std::normal_distribution<double> n(0.0, s);
  return {n(rng), n(rng), n(rng), n(rng)};
}

inline HVector hvec(int k, int l, std::vector<Quat> c, Basis b = Basis::U) { return {k, l, std::move(c), b}; }

// Random point of the negative region of H^{1,2} in the u basis.
inline HVector random_minus(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> r(0.0, 0.9);
  Quat a = random_quat(rng), b = random_quat(rng);
  const double n = std::sqrt(norm2(a) + norm2(b));
  const double s = r(rng) / n;
  return hvec(1, 2, {Quat(1.0) * 1.3, s * a, s * b});
}

}  // namespace qkq::test
