#pragma once

#include <array>
#include <string>
#include <vector>

#include "qkq/slices.hpp"

namespace qkq {

struct MetricSample {
  Eigen::Vector4d xi;
  Eigen::Matrix4d G;
  double h = 1e-3;
  double gVV = 0;  // ambient norm of the Killing field
};

// G without any stencil-margin check; used inside difference stencils.
Eigen::Matrix4d quotient_metric_at(const QuotientChart& c, const Eigen::Vector4d& xi, double* gVV = nullptr);
MetricSample quotient_metric(const QuotientChart& c, const Eigen::Vector4d& xi, double h = 1e-3);

enum class Verdict { SDE_Negative, ConformallyFlat, Failed };
enum class VanishingHalf { None, Plus, Minus, Both };
std::string to_string(Verdict v);
std::string to_string(VanishingHalf v);

struct CurvatureReport {
  Eigen::Vector4d xi;
  double h = 1e-3;
  Eigen::Matrix4d G;
  double scalar = 0;
  double einstein_residual = 0;
  double weyl_sd = 0;   // |W+|
  double weyl_asd = 0;  // |W-|
  double riem_norm = 0;
  double constant_curvature = 0;  // |R - (s/12) g.g| / |R|
  Eigen::Matrix3d Wplus, Wminus;
  VanishingHalf vanishing = VanishingHalf::None;
  Verdict verdict = Verdict::Failed;
};

struct Thresholds {
  double einstein = 1e-4;
  double self_dual = 1e-3;
  double flat = 1e-4;
};

CurvatureReport curvature_report(const QuotientChart& c, const Eigen::Vector4d& xi, double h = 1e-3,
                                 const Thresholds& th = {});

double constant_curvature_residual(const std::vector<CurvatureReport>& grid);
// Sorted eigenvalues of the non-vanishing Weyl half.
Eigen::Vector3d weyl_plus_spectrum(const CurvatureReport& r);
// Distance of the normalized spectrum from +-(2,-1,-1)/sqrt6.
double spectral_type_deviation(const Eigen::Vector3d& ev);

struct Grid {
  Eigen::Vector4d lo, hi;
  std::array<int, 4> n{3, 3, 3, 3};
};
Grid default_grid(const QuotientChart& c, int n = 3);
std::vector<Eigen::Vector4d> grid_points(const Grid& g);

// Points evaluated on up to `threads` workers; result order follows grid_points.
std::vector<CurvatureReport> curvature_grid(const QuotientChart& c, const Grid& g, double h = 1e-3,
                                            unsigned threads = 1, const Thresholds& th = {});

struct GridSummary {
  double max_einstein = 0;
  double scalar_min = 0, scalar_max = 0;
  double scalar_variation = 0;  // (max - min) / |mean|
  double max_weyl_ratio = 0;    // min half / (sum), worst point
  double max_flat_ratio = 0;    // max half / |Riem|, worst point
  double constant_curvature = 0;
  double max_spectral_deviation = 0;
  bool orientation_consistent = true;
  VanishingHalf vanishing = VanishingHalf::None;
  Verdict verdict = Verdict::Failed;
};
GridSummary summarize(const std::vector<CurvatureReport>& reports, const Thresholds& th = {});

}  // namespace qkq
