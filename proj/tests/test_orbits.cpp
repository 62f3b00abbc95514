#include <doctest.h>

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "qkq/error.hpp"
#include "qkq/orbits.hpp"

using namespace qkq;

namespace {

HMatrix3 conjugate(const HMatrix3& g, const HMatrix3& Y) { return g * Y * group_inverse(g); }

double commutator(const HMatrix3& A, const HMatrix3& B) { return norm(A * B - B * A); }

std::vector<double> sorted_real(const std::vector<std::complex<double>>& r) {
  std::vector<double> v;
  for (auto z : r) v.push_back(z.real());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("normal form matrices") {
  HMatrix3 D = normal_form_matrix(GeneratorForm::t0diag(1, 2, 3));
  CHECK(max_abs_diff(D, HMatrix3::Diagonal(Quat::I(), 2.0 * Quat::I(), 3.0 * Quat::I())) == 0);
  CHECK_THROWS_AS(normal_form_matrix(GeneratorForm::t1(0, 1, 1)), Error);
  CHECK_THROWS_AS(normal_form_matrix(GeneratorForm::t2(0, 1)), Error);

  Sp12Element n1 = make_normal_form(GeneratorForm::t1(1, 0, 0));
  CHECK(n1.height == 1);
  CHECK(norm(n1.N * n1.N) < 1e-12);
  CHECK(norm(n1.N) > 0.1);
  Sp12Element n2 = make_normal_form(GeneratorForm::t2(1, 0));
  CHECK(n2.height == 2);
  CHECK(norm(n2.N * n2.N * n2.N) < 1e-12);
  CHECK(norm(n2.N * n2.N) > 0.1);
  for (auto b : {Basis::U, Basis::VTilde}) {
    CHECK(is_sp12(normal_form_matrix(GeneratorForm::t0split(1, 2, 5, b)), 1e-12, b));
    CHECK(is_sp12(normal_form_matrix(GeneratorForm::t1(-1, 2, 5, b)), 1e-12, b));
    CHECK(is_sp12(normal_form_matrix(GeneratorForm::t2(1, 3, b)), 1e-12, b));
  }
}

TEST_CASE("decomposition over a parameter grid") {
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (int c = -3; c <= 3; ++c) {
        std::vector<std::pair<GeneratorForm, int>> cases = {{GeneratorForm::t0diag(a, b, c), 0}};
        if (a != 0) {
          cases.push_back({GeneratorForm::t0split(a, b, c), 0});
          cases.push_back({GeneratorForm::t1(a, b, c), 1});
          cases.push_back({GeneratorForm::t2(a, b), 2});
        }
        for (const auto& [f, h] : cases) {
          if (f.family == Family::T0Diag && a == 0 && b == 0 && c == 0) continue;
          const Sp12Element e = make_normal_form(f);
          CHECK(e.height == h);
          CHECK(sp12_defect(e.Y) < 1e-12);
          CHECK(max_abs_diff(e.S + e.N, e.Y) < 1e-10);
          CHECK(commutator(e.S, e.N) < 1e-9);
          HMatrix3 P = HMatrix3::Identity();
          for (int k = 0; k <= h; ++k) P = P * e.N;
          CHECK(norm(P) < 1e-9);
        }
      }
  Decomposition d = decompose(to_u(normal_form_matrix(GeneratorForm::t1(1, 0, 0, Basis::VTilde))));
  CHECK(norm(d.S) < 1e-12);
  CHECK(d.height == 1);
  d = decompose(to_u(normal_form_matrix(GeneratorForm::t2(1, 0, Basis::VTilde))));
  CHECK(norm(d.S) < 1e-12);
  CHECK(d.height == 2);
}

TEST_CASE("classification") {
  CHECK(to_string(classify(make_element(HMatrix3::Diagonal(Quat::I(), 2.0 * Quat::I(), 3.0 * Quat::I())))) ==
        "T0Diag(1,2,3)");
  CHECK(to_string(classify(make_normal_form(GeneratorForm::t2(1, 3, Basis::VTilde)))) == "T2(1,3)");
  CHECK_THROWS_AS(classify(make_element(HMatrix3::Zero())), Error);

  // conjugated split torus element
  std::mt19937_64 rng(2024);
  const HMatrix3 g = random_group_element(rng);
  const GeneratorForm f = classify(make_element(conjugate(g, to_u(normal_form_matrix(GeneratorForm::t0split(1, 2, 5, Basis::VTilde))))));
  CHECK(f.family == Family::T0Split);
  CHECK(f.lambda == doctest::Approx(1).epsilon(1e-6));
  CHECK(f.p == doctest::Approx(2).epsilon(1e-6));
  CHECK(f.q == doctest::Approx(5).epsilon(1e-6));
}

TEST_CASE("classification is conjugation stable for heights 0 and 2") {
  std::mt19937_64 rng(77);
  const std::vector<GeneratorForm> forms = {GeneratorForm::t0diag(1, 2, 3), GeneratorForm::t0diag(-2, 1, 4),
                                            GeneratorForm::t0split(1, 2, 5), GeneratorForm::t2(1, 3),
                                            GeneratorForm::t2(1, 0)};
  for (const auto& f : forms) {
    const HMatrix3 Y = normal_form_matrix(f);
    const GeneratorForm ref = classify(make_element(normal_form_matrix(f)));
    for (int n = 0; n < 50; ++n) {
      const HMatrix3 g = random_group_element(rng);
      const GeneratorForm c = classify(make_element(conjugate(g, Y)));
      CHECK(c.family == ref.family);
      for (int i = 0; i < 3; ++i) CHECK(c.weights[i] == doctest::Approx(ref.weights[i]).epsilon(1e-6));
      CHECK(c.p == doctest::Approx(ref.p).epsilon(1e-6));
      CHECK(c.q == doctest::Approx(ref.q).epsilon(1e-6));
    }
  }
}

TEST_CASE("height-one sign resolution") {
  for (double lam : {1.0, -1.0}) {
    const GeneratorForm f = classify(make_normal_form(GeneratorForm::t1(lam, 2, 3)));
    CHECK(f.family == Family::T1);
    CHECK(f.sign_resolved);
    CHECK(f.lambda == lam);
  }
  std::mt19937_64 rng(5);
  const HMatrix3 g = random_group_element(rng);
  const GeneratorForm f = classify(make_element(conjugate(g, normal_form_matrix(GeneratorForm::t1(1, 2, 3)))));
  CHECK(f.family == Family::T1);
  CHECK_FALSE(f.sign_resolved);
  CHECK(f.p == doctest::Approx(2).epsilon(1e-6));
  CHECK(f.q == doctest::Approx(3).epsilon(1e-6));
  CHECK(to_string(f) == "T1(unresolved,2,3)");
  // p = 0: the sign is normalized away
  CHECK(classify(make_element(conjugate(g, normal_form_matrix(GeneratorForm::t1(-1, 0, 3))))).sign_resolved);
}

TEST_CASE("Bryant cases") {
  std::ifstream in(QKQ_ORACLE_JSON);
  const auto o = nlohmann::json::parse(in);
  BryantCase c = bryant_case(GeneratorForm::t0diag(1, 2, 3));
  CHECK(c.id == BryantId::Case4);
  const auto roots = sorted_real(c.Pc);
  for (int i = 0; i < 4; ++i) CHECK(roots[i] == doctest::Approx(o["bryant_123_roots"][i].get<double>()));

  c = bryant_case(GeneratorForm::t2(1, 2));
  CHECK(c.id == BryantId::Case2);
  CHECK(c.Pc.size() == 4);
  CHECK(c.Pm.size() == 4);  // one simple root and one triple block
  c = bryant_case(GeneratorForm::t1(1, 0, 0));
  CHECK(c.id == BryantId::Exceptional);
  CHECK(c.Pc.size() == 4);
  CHECK(c.Pm.size() == 2);
  for (auto z : c.Pc) CHECK(std::abs(z) < 1e-12);

  CHECK(bryant_case(GeneratorForm::t0diag(0, 2, 3)).id == BryantId::Exceptional);
  CHECK(bryant_case(GeneratorForm::t0split(1, 2, 0)).id == BryantId::Exceptional);
  CHECK(bryant_case(GeneratorForm::t0split(1, 0, 2)).id == BryantId::CohomOne);
  CHECK(bryant_case(GeneratorForm::t0split(1, 1, 2)).id == BryantId::Case1);
  CHECK(bryant_case(GeneratorForm::t1(1, 1, 2)).id == BryantId::Case3);
  CHECK(bryant_case(GeneratorForm::t2(1, 0)).id == BryantId::Exceptional);

  // Pm | Pc and trace-free Pc for every emitted case
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (int d = 1; d <= 3; ++d)
        for (const auto& f : {GeneratorForm::t0diag(a, b, d), GeneratorForm::t0split(d, a, b), GeneratorForm::t1(1, a, b),
                              GeneratorForm::t2(1, a)}) {
          const BryantCase bc = bryant_case(f);
          CHECK(divides(bc.Pm, bc.Pc));
          std::complex<double> s = 0;
          for (auto z : bc.Pc) s += z;
          CHECK(std::abs(s) < 1e-9);
        }
}
