#pragma once

#include <array>
#include <vector>

#include "irs/types.hpp"

namespace irs {

// Mean |pred - gt| over pixels valid in both maps.
double epe(const DisparityMap& pred, const DisparityMap& gt);
ErrorMap epe_error_map(const DisparityMap& pred, const DisparityMap& gt);

constexpr double smooth_l1(double x) noexcept {
  const double a = x < 0 ? -x : x;
  return a < 1.0 ? 0.5 * x * x : a - 0.5;
}

// (1/N) * sum smooth_l1(gt - pred) over jointly valid pixels.
double scale_loss(const DisparityMap& pred, const DisparityMap& gt);

inline constexpr int kPyramidLevels = 7;
using ScaleWeights = std::array<double, kPyramidLevels>;
inline constexpr ScaleWeights kDefaultScaleWeights = {0.32, 0.16, 0.08, 0.04, 0.02, 0.01, 0.005};

// Level s is ceil(H/2^s) x ceil(W/2^s). Each level averages the valid pixels
// of 2x2 blocks of the previous one and halves the disparity.
std::vector<DisparityMap> build_gt_pyramid(const DisparityMap& gt);

struct LossPyramid {
  std::vector<DisparityMap> levels;  // full resolution first
  ScaleWeights weights = kDefaultScaleWeights;

  // Throws DomainError/DimensionError on a wrong level count, negative weight
  // or a level whose shape breaks the halving chain.
  void validate() const;
};

struct MultiscaleLoss {
  double total = 0.0;
  std::array<double, kPyramidLevels> per_scale{};
};

MultiscaleLoss multiscale_disparity_loss_terms(const LossPyramid& p, const DisparityMap& gt);
double multiscale_disparity_loss(const LossPyramid& p, const DisparityMap& gt);

// (1/N) * sum ||n - n_gt||^2 over jointly valid pixels.
double normal_loss(const NormalMap& pred, const NormalMap& gt);

struct NormalErrorStats {
  double mean_deg = 0.0;
  double median_deg = 0.0;
  double frac_11_25 = 0.0;
  double frac_22_5 = 0.0;
  double frac_30 = 0.0;
  std::size_t pixel_count = 0;
};

// Per-pixel angle in degrees between jointly valid normals.
ErrorMap normal_angle_error_map(const NormalMap& pred, const NormalMap& gt);
// Angles in degrees over jointly valid pixels, row-major order.
std::vector<double> normal_angles_deg(const NormalMap& pred, const NormalMap& gt);
// Statistics over a set of per-pixel angles; strict "<" thresholds, exact median.
NormalErrorStats angle_error_stats(std::vector<double> angles_deg);
NormalErrorStats normal_angle_errors(const NormalMap& pred, const NormalMap& gt);

}  // namespace irs
