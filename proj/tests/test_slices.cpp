#include <doctest.h>

#include <fstream>
#include <random>

#include <json.hpp>

#include "qkq/error.hpp"
#include "qkq/slices.hpp"

using namespace qkq;

namespace {

struct Case {
  SliceFamily f;
  std::vector<double> p;
};

const std::vector<Case> kCases = {
    {SliceFamily::PL, {2, 3, 3}},         {SliceFamily::PL, {1, 3, 3}},       {SliceFamily::GenPedersen, {1, 1}},
    {SliceFamily::GenPedersen, {0, 0}},   {SliceFamily::HeightOne, {-1, 2}},  {SliceFamily::HeightOne, {0, 1}},
    {SliceFamily::HeightOne, {1, 2}},     {SliceFamily::HeightTwo, {1}},      {SliceFamily::HeightTwo, {-2}},
    {SliceFamily::HeightTwo, {0}},        {SliceFamily::Bergman, {1, 1, 1}}};

std::vector<Eigen::Vector4d> box(const QuotientChart& c, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<Eigen::Vector4d> out;
  for (int i = 0; i < n; ++i) {
    Eigen::Vector4d r(U(rng), U(rng), U(rng), U(rng));
    out.push_back(c.center + c.halfwidth.cwiseProduct(r));
  }
  return out;
}

Eigen::VectorXd flat(const Tangent& t) {
  Eigen::VectorXd v(4 * t.size());
  for (std::size_t i = 0; i < t.size(); ++i) v.segment<4>(4 * i) = t[i].coeffs();
  return v;
}

}  // namespace

TEST_CASE("slice points lie in the zero set") {
  for (const auto& cs : kCases) {
    const QuotientChart c = make_chart(cs.f, cs.p);
    CAPTURE(c.name());
    for (const auto& xi : box(c, 40, 3)) {
      REQUIRE(in_domain(c, xi));
      const ChartPoint y = embed_native(c, xi);
      CHECK(f_inhomog(c.moment_family, cs.p, y).norm() < 1e-10);
      CHECK(region(from_chart(y)) == Region::Minus);
      if (cs.f == SliceFamily::GenPedersen) CHECK(std::abs(y.x[0].w + 0.5) < 1e-15);
      if (cs.f == SliceFamily::HeightOne && cs.p[0] != 0) CHECK(std::abs(y.x[0].x) < 1e-15);
      if (cs.f == SliceFamily::HeightTwo && cs.p[0] != 0) CHECK(std::abs(y.x[1].x) < 1e-15);
    }
  }
}

TEST_CASE("slices are transversal to the orbits") {
  for (const auto& cs : kCases) {
    const QuotientChart c = make_chart(cs.f, cs.p);
    CAPTURE(c.name());
    for (const auto& xi : box(c, 10, 5)) {
      const SliceFrame fr = slice_frame(c, xi);
      Eigen::MatrixXd J(5, 8);
      for (int a = 0; a < 4; ++a) J.row(a) = flat(fr.t[a]).transpose();
      J.row(4) = flat(fr.V).transpose();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
      CHECK(svd.singularValues()(4) > 1e-6);
    }
  }
}

TEST_CASE("embedding is injective on samples") {
  for (const auto& cs : kCases) {
    const QuotientChart c = make_chart(cs.f, cs.p);
    const auto pts = box(c, 30, 9);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const ChartPoint a = embed_native(c, pts[i]), b = embed_native(c, pts[j]);
        double d = 0;
        for (int k = 0; k < 2; ++k) d += abs(a.x[k] - b.x[k]);
        CHECK(d > 1e-9);
      }
  }
}

TEST_CASE("generalized Pedersen slice") {
  std::ifstream in(QKQ_ORACLE_JSON);
  const auto o = nlohmann::json::parse(in);
  CHECK(o["genped_y1_at_y2_0"]["yb"] == "-p/2");
  for (double p : {0.0, 1.0, -3.0}) {
    const ChartPoint y = slice_gen_pedersen(p, 0.7, Quat());
    CHECK(abs(y.x[0] - Quat(-0.5, -p / 2, 0, 0)) < 1e-15);
  }
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  for (int n = 0; n < 100; ++n) {
    const Quat y2(U(rng), U(rng), U(rng), U(rng));
    const ChartPoint y = slice_gen_pedersen(1.3, -0.4, y2);
    CHECK(f_inhomog(MomentFamily::GenPedersen, {1.3, -0.4}, y).norm() < 1e-12);
  }
  CHECK_THROWS_AS(slice_gen_pedersen(0, 0, Quat(1, 0, 0, 0)), Error);

  // exp(tM) scales y1 + conj(y1) by exp(-2t)
  const QuotientChart c = make_chart(SliceFamily::GenPedersen, {0.8, -0.6});
  const HVector v = from_chart(embed_native(c, c.center));
  for (double t : {-0.5, -0.2, 0.3, 0.5}) {
    const HVector w = act(mat_exp(family_generator(MomentFamily::GenPedersen, {0.8, -0.6}).M, t, Basis::VTilde), v);
    const ChartPoint y = to_chart(w, 0);
    CHECK(std::abs(2 * y.x[0].w - std::exp(-2 * t) * -1.0) < 1e-10);
  }
}

TEST_CASE("height-one slice domains") {
  // hyperboloid exterior for 0 < p < |q|
  CHECK_NOTHROW(slice_height_one(1, 2, std::sqrt(2.0), 0));
  CHECK_THROWS_AS(slice_height_one(1, 2, 0, std::sqrt(2.0)), Error);
  // ellipsoid interior for p < -|q|
  CHECK_NOTHROW(slice_height_one(-1, 0, 0, 0));
  CHECK_THROWS_AS(slice_height_one(-1, 0, 2, 0), Error);
  CHECK_THROWS_AS(make_chart(SliceFamily::HeightOne, {1, 1}), Error);
  try {
    make_chart(SliceFamily::HeightOne, {1, 1});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Degenerate);
  }
  try {
    slice_height_one(1, 2, 0, 0);
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
    CHECK(std::string(e.what()).find("< -1") != std::string::npos);
  }
  const ChartPoint y = slice_height_one_p0(1, -2, 0.1, 0.2, 0.3);
  CHECK(std::abs(abs(y.x[1]) - 1) < 1e-15);
  CHECK(f_inhomog(MomentFamily::HeightOne, {0, 1}, y).norm() < 1e-12);
  CHECK_THROWS_AS(slice_height_one_p0(1, -0.5, 0, 0, 0), Error);
}

TEST_CASE("height-two slice") {
  std::ifstream in(QKQ_ORACLE_JSON);
  const auto o = nlohmann::json::parse(in);
  const ChartPoint y = slice_height_two(1, 1, 0, 0);
  CHECK(2 * y.x[0].w == doctest::Approx(o["height2_p1_s1_re_y1_twice"].get<double>()).epsilon(1e-15));
  CHECK_THROWS_AS(slice_height_two(1, 0.1, {0.5, 0}, 0), Error);
  const ChartPoint z = slice_height_two_p0(Quat(-1, 0.2, 0.3, 0.4));
  CHECK(abs(z.x[1]) == 0);
  CHECK_THROWS_AS(slice_height_two_p0(Quat(0.1, 0, 0, 0)), Error);

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> U(-1, 1);
  int used = 0;
  while (used < 100) {
    const double s2 = 2 * std::abs(U(rng)) + 1e-3;
    const std::complex<double> w2(U(rng), U(rng));
    if (!(s2 > std::norm(w2))) continue;
    ++used;
    const ChartPoint p = slice_height_two(1, s2, w2, U(rng));
    CHECK(region(from_chart(p)) == Region::Minus);
    CHECK(f_inhomog(MomentFamily::HeightTwo, {1}, p).norm() < 1e-12);
  }
}

TEST_CASE("PL slice") {
  std::ifstream in(QKQ_ORACLE_JSON);
  const auto o = nlohmann::json::parse(in);
  const ChartPoint x = slice_pl(WeightTriple::make(1, 2, 1), 0, 0);
  CHECK(x.x[0].norm2() == doctest::Approx(o["pl_121_z1sq"].get<double>()).epsilon(1e-15));
  const ChartPoint r = slice_pl(WeightTriple::make(2, 3, 3), {0.1, 0.2}, {0.05, -0.02}, std::polar(1.0, 0.7));
  CHECK(f_inhomog(MomentFamily::Weighted, {2, 3, 3}, r).norm() < 1e-12);
  CHECK(std::arg(z_of(r.x[0])) == doctest::Approx(0.7));
  CHECK_THROWS_AS(slice_pl(WeightTriple::make(2, 3, 3), 0, {0.5, 0}), Error);
  CHECK_THROWS_AS(make_chart(SliceFamily::PL, {1, 1, 1}), Error);
  CHECK_THROWS_AS(make_chart(SliceFamily::PL, {2, 4, 1}), Error);
}

TEST_CASE("Bergman slice") {
  const WeightTriple p = WeightTriple::make(1, 1, 1);
  const ChartPoint x = slice_bergman(p, Eigen::Vector4d::Zero());
  CHECK(abs(x.x[0] - Quat(0, 0, 1, 0)) < 1e-15);
  CHECK(abs(x.x[1]) == 0);
  const QuotientChart c = make_chart(SliceFamily::Bergman, {1, 1, 1});
  const SliceFrame fr = slice_frame(c, c.center);
  Eigen::MatrixXd J(4, 8);
  for (int a = 0; a < 4; ++a) J.row(a) = flat(fr.t[a]).transpose();
  CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(J).rank() == 4);
  CHECK_THROWS_AS(make_chart(SliceFamily::Bergman, {1, 1, 3}), Error);
}

TEST_CASE("Killing fields") {
  const ChartPoint x{1, 2, 0, {Quat(0.1, 0.2, -0.3, 0.05), Quat(-0.2, 0.1, 0.15, 0.3)}, Basis::U};
  const double p0 = 2, p1 = 3, p2 = 3;
  const Tangent V = killing_field(family_generator(MomentFamily::Weighted, {p0, p1, p2}).M, x);
  const double w[2] = {p1, p2};
  for (int a = 0; a < 2; ++a) {
    const Quat want = w[a] * Quat::I() * x.x[a] - x.x[a] * (p0 * Quat::I());
    CHECK(abs(V[a] - want) < 1e-14);
  }
  const Tangent Z = killing_field(HMatrix3::Zero(), x);
  CHECK(abs(Z[0]) + abs(Z[1]) == 0);

  // closed form flow vs the generator
  const ChartPoint y{1, 2, 0, {Quat(-1, 0.0, 0.2, 0.1), Quat(0.3, 0.0, 0.1, -0.2)}, Basis::VTilde};
  const double p = 0.4, q = 1.5;
  const Tangent T = killing_field(family_generator(MomentFamily::HeightOne, {p, q}).M, y);
  const double h = 1e-5;
  auto flow = [&](double t) {
    const Quat ep = exp_i(p * t), em = exp_i(-p * t);
    return std::array<Quat, 2>{ep * (y.x[0] - t * Quat::I()) * em, exp_i(q * t) * y.x[1] * em};
  };
  const auto a = flow(h), b = flow(-h);
  for (int k = 0; k < 2; ++k) CHECK(abs((a[k] - b[k]) * (1 / (2 * h)) - T[k]) < 1e-8);
}
