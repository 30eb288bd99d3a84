#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "irs/histogram.hpp"
#include "irs/types.hpp"

namespace irs {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // luminance in [0, 255]
};

enum class GrayRounding { kNone, kHalfEven };

// 0.299 R + 0.587 G + 0.114 B, evaluated exactly in thousandths.
GrayImage rgb_to_gray(const RgbImage& img, GrayRounding rounding);

// Luminance of one pixel in thousandths of a gray level (0..255000).
constexpr std::uint32_t gray_milli(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  return 299u * r + 587u * g + 114u * b;
}

// Round-half-even of gray_milli / 1000.
constexpr std::uint8_t gray8(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  const std::uint32_t m = gray_milli(r, g, b);
  std::uint32_t q = m / 1000u;
  const std::uint32_t rem = m % 1000u;
  if (rem > 500u || (rem == 500u && (q & 1u))) ++q;
  return static_cast<std::uint8_t>(q);
}

inline constexpr double kDisparityScale = 200.0;
inline constexpr double kDisparityRangeHi = 50.0;
inline constexpr int kDefaultDisparityBins = 500;
inline constexpr double kDefaultNormalBinDeg = 1.0;

// Width-normalized disparity: every valid pixel contributes 200 * d / width
// over [0, 50]; the rest is overflow.
Histogram1D disparity_sample_histogram(const DisparityMap& dm, int bins = kDefaultDisparityBins);
// Pooled over all maps. Throws EmptyInputError when no valid pixel exists.
Histogram1D normalized_disparity_histogram(std::span<const DisparityMap> maps,
                                           int bins = kDefaultDisparityBins);

// Normal (alpha, beta) tallies of one map over [0,360) x [-90,0]. The result is
// a closed sample (sample_count 1) unless the map has no valid normals, in
// which case it is empty (sample_count 0).
Histogram2D normal_angle_sample_histogram(const NormalMap& nm,
                                          double bin_deg = kDefaultNormalBinDeg);
// Per-sample normalized distributions averaged over samples; read mean_fraction().
Histogram2D normal_angle_histogram(std::span<const NormalMap> maps,
                                   double bin_deg = kDefaultNormalBinDeg);
Histogram2D empty_normal_angle_histogram(double bin_deg = kDefaultNormalBinDeg);

struct StereoSample {
  const RgbImage* left = nullptr;
  const RgbImage* right = nullptr;
  const DisparityMap* disparity = nullptr;
};

// 256 x 256 tallies of (gray_left(u,v), gray_right(round(u - d), v)) over
// valid left pixels whose match lies inside the right image. x = left gray.
Histogram2D brightness_joint_histogram(const RgbImage& left, const RgbImage& right,
                                       const DisparityMap& gt);
// One closed sample per pair, merged in order; read mean_counts().
Histogram2D brightness_joint_histogram(std::span<const StereoSample> pairs);
Histogram2D empty_brightness_histogram();

struct OverexposureStats {
  double fraction_both_255 = 0.0;
  double fraction_either_255 = 0.0;
};

OverexposureStats overexposure_stats(const Histogram2D& h);

}  // namespace irs
