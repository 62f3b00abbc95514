#include <doctest.h>

#include <chrono>

#include "qkq/curvature.hpp"
#include "qkq/error.hpp"

using namespace qkq;

namespace {

Eigen::Matrix4d lmul(const Quat& a) {
  Eigen::Matrix4d L;
  for (int c = 0; c < 4; ++c) {
    Eigen::Vector4d e = Eigen::Vector4d::Unit(c);
    L.col(c) = (a * Quat(e[0], e[1], e[2], e[3])).coeffs();
  }
  return L;
}

Eigen::Matrix4d rmul(const Quat& a) {
  Eigen::Matrix4d R;
  for (int c = 0; c < 4; ++c) {
    Eigen::Vector4d e = Eigen::Vector4d::Unit(c);
    R.col(c) = (Quat(e[0], e[1], e[2], e[3]) * a).coeffs();
  }
  return R;
}

}  // namespace

TEST_CASE("quotient metric basics") {
  const QuotientChart flat = make_chart(SliceFamily::GenPedersen, {0, 0});
  const Eigen::Matrix4d G0 = quotient_metric(flat, Eigen::Vector4d::Zero()).G;
  CHECK((G0 - G0(0, 0) * Eigen::Matrix4d::Identity()).norm() < 1e-12 * G0.norm());
  CHECK(G0(0, 0) > 0);

  for (auto [f, p] : std::vector<std::pair<SliceFamily, std::vector<double>>>{
           {SliceFamily::PL, {2, 3, 3}}, {SliceFamily::HeightOne, {-1, 2}}, {SliceFamily::Bergman, {1, 1, 1}}}) {
    const QuotientChart c = make_chart(f, p);
    for (const auto& xi : grid_points(default_grid(c))) {
      const MetricSample m = quotient_metric(c, xi);
      CHECK((m.G - m.G.transpose()).norm() < 1e-13 * m.G.norm());
      CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(m.G).eigenvalues().minCoeff() > 0);
      CHECK(std::abs(m.gVV) > 1e-8);
    }
  }
}

TEST_CASE("torus acts isometrically on the Pedersen quotients") {
  // y2 -> tau y2 sigma^{-1} is linear on the slice coordinates
  for (auto pq : {std::pair{0.0, 0.0}, std::pair{1.0, 1.0}}) {
    const QuotientChart c = make_chart(SliceFamily::GenPedersen, {pq.first, pq.second});
    const Quat s = exp_i(0.4), t = exp_i(-1.1);
    const Eigen::Matrix4d L = lmul(t) * rmul(s.conj());
    const Eigen::Vector4d xi(0.2, -0.1, 0.3, 0.05);
    const Eigen::Matrix4d G = quotient_metric(c, xi).G;
    const Eigen::Matrix4d H = quotient_metric(c, L * xi).G;
    CHECK((L.transpose() * H * L - G).norm() < 1e-10 * G.norm());
  }
}

TEST_CASE("metric errors") {
  const QuotientChart c = make_chart(SliceFamily::GenPedersen, {1, 1});
  CHECK_THROWS_AS(quotient_metric(c, Eigen::Vector4d(0.999, 0, 0, 0)), Error);
  try {
    quotient_metric(c, Eigen::Vector4d(0.9995, 0, 0, 0));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("curvature verdicts") {
  const QuotientChart gp = make_chart(SliceFamily::GenPedersen, {0, 0});
  CurvatureReport r = curvature_report(gp, gp.center);
  CHECK(r.verdict == Verdict::ConformallyFlat);
  CHECK(r.einstein_residual < 1e-4);
  CHECK(r.scalar < 0);

  const QuotientChart h2 = make_chart(SliceFamily::HeightTwo, {0});
  CHECK(curvature_report(h2, h2.center).verdict == Verdict::ConformallyFlat);

  const QuotientChart pl = make_chart(SliceFamily::PL, {2, 3, 3});
  r = curvature_report(pl, pl.center);
  CHECK(r.verdict == Verdict::SDE_Negative);
  CHECK(r.scalar < 0);
  CHECK(r.constant_curvature > 0.1);
  CHECK(spectral_type_deviation(weyl_plus_spectrum(r)) < 1e-3);

  const QuotientChart b = make_chart(SliceFamily::Bergman, {1, 1, 1});
  r = curvature_report(b, b.center);
  CHECK(r.verdict == Verdict::SDE_Negative);
  CHECK(spectral_type_deviation(weyl_plus_spectrum(r)) < 1e-3);
}

TEST_CASE("spectral type") {
  CHECK(spectral_type_deviation(Eigen::Vector3d(-1, -1, 2)) < 1e-15);
  CHECK(spectral_type_deviation(Eigen::Vector3d(-4, 2, 2)) < 1e-15);
  CHECK(spectral_type_deviation(Eigen::Vector3d(-1, 0, 1)) > 0.1);
}

TEST_CASE("grid evaluation") {
  const QuotientChart c = make_chart(SliceFamily::HeightTwo, {0});
  Grid g = default_grid(c, 2);
  const auto pts = grid_points(g);
  CHECK(pts.size() == 16);
  const auto one = curvature_grid(c, g, 1e-3, 1);
  const auto many = curvature_grid(c, g, 1e-3, 3);
  REQUIRE(one.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(one[i].xi == pts[i]);
    CHECK(many[i].xi == pts[i]);
    CHECK(one[i].scalar == many[i].scalar);
  }
  const GridSummary s = summarize(one);
  CHECK(s.verdict == Verdict::ConformallyFlat);
  CHECK(s.scalar_variation < 1e-3);
  CHECK(constant_curvature_residual(one) < 1e-3);

  g.hi[0] = 0.5;  // leaves the half space
  CHECK_THROWS_AS(curvature_grid(c, g, 1e-3, 2), Error);
}
