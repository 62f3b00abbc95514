#pragma once

#include <array>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "qkq/hnum.hpp"

namespace qkq {

enum class Family { T0Diag, T0Split, T1, T2 };

struct GeneratorForm {
  Family family = Family::T0Diag;
  Basis basis = Basis::U;
  std::array<double, 3> weights{};  // T0Diag
  double lambda = 1.0;              // T0Split, T1, T2
  double p = 0.0;
  double q = 0.0;
  bool sign_resolved = true;  // T1 with p != 0 from a non-normal-form input

  static GeneratorForm t0diag(double p0, double p1, double p2);
  static GeneratorForm t0split(double lambda, double p, double q, Basis b = Basis::U);
  static GeneratorForm t1(double lambda, double p, double q, Basis b = Basis::U);
  static GeneratorForm t2(double lambda, double p, Basis b = Basis::U);
};

std::string to_string(Family f);
std::string to_string(const GeneratorForm& f);

// Matrix of the form in its own basis (tilde variant when basis == VTilde).
HMatrix3 normal_form_matrix(const GeneratorForm& f);
// exp(t Delta) in the form's basis, from closed expressions.
HMatrix3 exp_normal_form(const GeneratorForm& f, double t);

struct Sp12Element {
  HMatrix3 Y;  // u basis
  Matrix6c Y6;
  HMatrix3 S;
  HMatrix3 N;
  int height = 0;
};

struct SpectralCluster {
  std::complex<double> value;
  int multiplicity = 0;
  Eigen::MatrixXcd basis;  // generalized eigenspace, 6 x multiplicity
};

std::vector<SpectralCluster> spectral_clusters(const Matrix6c& Y6);

Sp12Element make_element(const HMatrix3& Y, Basis b = Basis::U);
Sp12Element make_normal_form(const GeneratorForm& f);

struct Decomposition {
  HMatrix3 S;
  HMatrix3 N;
  int height = 0;
};
Decomposition decompose(const HMatrix3& Yu);

GeneratorForm classify(const Sp12Element& Y);

enum class BryantId { Case1, Case2, Case3, Case4, CohomOne, Homogeneous, Exceptional };
std::string to_string(BryantId id);

struct BryantCase {
  BryantId id = BryantId::Exceptional;
  std::vector<std::complex<double>> Pc;  // roots with multiplicity
  std::vector<std::complex<double>> Pm;
};

BryantCase bryant_case(const GeneratorForm& f);
bool divides(const std::vector<std::complex<double>>& pm, const std::vector<std::complex<double>>& pc, double tol = 1e-9);

// Random element of Sp(1,2) as a product of exponentials of random generators.
HMatrix3 random_sp12_generator(std::mt19937_64& rng, double scale);
HMatrix3 random_group_element(std::mt19937_64& rng, int factors = 3, double scale = 0.4);
HMatrix3 group_inverse(const HMatrix3& g);  // F^{-1} g^dagger F

}  // namespace qkq
