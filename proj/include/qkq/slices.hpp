#pragma once

#include <string>
#include <vector>

#include "qkq/moments.hpp"

namespace qkq {

enum class SliceFamily { PL, GenPedersen, HeightOne, HeightTwo, Bergman };
std::string to_string(SliceFamily f);
SliceFamily slice_family_from_string(const std::string& s);

struct QuotientChart {
  SliceFamily family = SliceFamily::PL;
  std::vector<double> params;
  int k = 1, l = 2;
  HMatrix3 generator;  // u basis (signature k,l)
  MomentFamily moment_family = MomentFamily::Weighted;
  Eigen::Vector4d center = Eigen::Vector4d::Zero();
  Eigen::Vector4d halfwidth = Eigen::Vector4d::Constant(0.1);

  std::string name() const;
};

// Throws parameter / domain errors for families with analytically empty slices.
QuotientChart make_chart(SliceFamily f, const std::vector<double>& params);

bool in_domain(const QuotientChart& c, const Eigen::Vector4d& xi, std::string* why = nullptr);

// Homogeneous u-basis point and its xi-derivatives (exact, forward-mode AD).
struct EmbedJet {
  HVec3<double> u;
  std::array<HVec3<double>, 4> du;
};
EmbedJet embed_jet(const QuotientChart& c, const Eigen::Vector4d& xi);
HVector embed_u(const QuotientChart& c, const Eigen::Vector4d& xi);
// u-chart point x = (u1 u0^{-1}, u2 u0^{-1})
ChartPoint embed(const QuotientChart& c, const Eigen::Vector4d& xi);
// native chart: y for v-tilde families, x otherwise
ChartPoint embed_native(const QuotientChart& c, const Eigen::Vector4d& xi);

struct SliceFrame {
  ChartPoint x;
  std::array<Tangent, 4> t;  // d x / d xi_a
  Tangent V;                 // Killing field at x
};
SliceFrame slice_frame(const QuotientChart& c, const Eigen::Vector4d& xi);

ChartPoint slice_gen_pedersen(double p, double q, const Quat& y2);
ChartPoint slice_height_one(double p, double q, std::complex<double> z2, std::complex<double> w2);
ChartPoint slice_height_one_p0(double q, double a, double c, double d, double s);
ChartPoint slice_height_two(double p, double s2, std::complex<double> w2, double r);
ChartPoint slice_height_two_p0(const Quat& y1);
ChartPoint slice_pl(const WeightTriple& p, std::complex<double> z2, std::complex<double> alpha,
                    std::complex<double> phase = 1.0);
ChartPoint slice_bergman(const WeightTriple& p, const Eigen::Vector4d& xi);

// d/dt|0 of exp(tM) acting on a chart point; M is expressed in p.basis.
Tangent killing_field(const HMatrix3& M, const ChartPoint& p);
Tangent killing_field(const Sp12Element& Y, const ChartPoint& p);

}  // namespace qkq
