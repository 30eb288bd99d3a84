#include "irs/dataset_stats.hpp"

#include <cmath>
#include <string>

#include "irs/d2n.hpp"
#include "irs/error.hpp"
#include "irs/parallel.hpp"

namespace irs {

GrayImage rgb_to_gray(const RgbImage& img, GrayRounding rounding) {
  GrayImage out{img.width, img.height, {}};
  const auto n = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* p = img.data.data() + 3 * i;
    out.values[i] = rounding == GrayRounding::kHalfEven
                        ? static_cast<double>(gray8(p[0], p[1], p[2]))
                        : static_cast<double>(gray_milli(p[0], p[1], p[2])) / 1000.0;
  }
  return out;
}

Histogram1D disparity_sample_histogram(const DisparityMap& dm, int bins) {
  if (dm.width() <= 0) throw DimensionError("disparity map has zero width");
  Histogram1D h(HistogramKind::kDisparity, BinAxis::uniform(0.0, kDisparityRangeHi, bins));
  const double scale = kDisparityScale / dm.width();
  const int rows = dm.height();
  const int w = dm.width();
  const auto nb = h.counts.size();

  // Per-row tallies keep the parallel result independent of scheduling.
#pragma omp parallel num_threads(thread_count())
  {
    std::vector<std::uint64_t> local(nb, 0);
    std::uint64_t local_overflow = 0;
#pragma omp for schedule(static) nowait
    for (int v = 0; v < rows; ++v) {
      for (int u = 0; u < w; ++u) {
        if (!dm.valid(u, v)) continue;
        const double d = dm.at(u, v);
        if (!std::isfinite(d)) continue;
        if (const auto b = h.axis.bin_of(scale * d)) {
          ++local[static_cast<std::size_t>(*b)];
        } else {
          ++local_overflow;
        }
      }
    }
#pragma omp critical(irs_disparity_hist)
    {
      for (std::size_t i = 0; i < nb; ++i) h.counts[i] += local[i];
      h.overflow += local_overflow;
    }
  }
  h.sample_count = 1;
  return h;
}

Histogram1D normalized_disparity_histogram(std::span<const DisparityMap> maps, int bins) {
  if (maps.empty()) throw EmptyInputError("no disparity maps given");
  Histogram1D acc(HistogramKind::kDisparity, BinAxis::uniform(0.0, kDisparityRangeHi, bins));
  for (const auto& m : maps) merge_into(acc, disparity_sample_histogram(m, bins));
  if (acc.total() == 0) throw EmptyInputError("no valid disparities in input");
  return acc;
}

namespace {

int bins_for(double span_deg, double bin_deg) {
  if (!(bin_deg > 0.0) || !std::isfinite(bin_deg)) throw DomainError("bin size must be positive");
  const double n = span_deg / bin_deg;
  const double r = std::round(n);
  if (r < 1.0 || std::abs(n - r) > 1e-9 * r) {
    throw DomainError("bin size " + std::to_string(bin_deg) + " does not divide " +
                      std::to_string(span_deg) + " degrees");
  }
  return static_cast<int>(r);
}

}  // namespace

Histogram2D empty_normal_angle_histogram(double bin_deg) {
  return Histogram2D(HistogramKind::kNormalAngle,
                     BinAxis::uniform(0.0, 360.0, bins_for(360.0, bin_deg)),
                     BinAxis::uniform(-90.0, 0.0, bins_for(90.0, bin_deg)),
                     DisplayTransform::kLog1p);
}

Histogram2D normal_angle_sample_histogram(const NormalMap& nm, double bin_deg) {
  Histogram2D acc = empty_normal_angle_histogram(bin_deg);
  Histogram2D tally = acc;
  const int rows = nm.height();
  const int w = nm.width();
  const auto nb = tally.counts.size();

#pragma omp parallel num_threads(thread_count())
  {
    std::vector<std::uint64_t> local(nb, 0);
    std::uint64_t local_overflow = 0;
#pragma omp for schedule(static) nowait
    for (int v = 0; v < rows; ++v) {
      for (int u = 0; u < w; ++u) {
        if (!nm.valid(u, v)) continue;
        const Vec3d n = nm.at(u, v).cast<double>();
        const double len = n.norm();
        if (!(len > 0.0) || !std::isfinite(len)) continue;
        const NormalAngles a = normal_to_angles(n * (1.0 / len));
        const auto xb = tally.x_axis.bin_of(a.alpha_deg);
        const auto yb = tally.y_axis.bin_of(a.beta_deg);
        if (xb && yb) {
          ++local[tally.index(*xb, *yb)];
        } else {
          ++local_overflow;
        }
      }
    }
#pragma omp critical(irs_normal_hist)
    {
      for (std::size_t i = 0; i < nb; ++i) tally.counts[i] += local[i];
      tally.overflow += local_overflow;
    }
  }
  if (tally.total() > 0) acc.add_sample(tally);
  return acc;
}

Histogram2D normal_angle_histogram(std::span<const NormalMap> maps, double bin_deg) {
  if (maps.empty()) throw EmptyInputError("no normal maps given");
  Histogram2D acc = empty_normal_angle_histogram(bin_deg);
  for (const auto& m : maps) merge_into(acc, normal_angle_sample_histogram(m, bin_deg));
  if (acc.sample_count == 0) throw EmptyInputError("no valid normals in input");
  return acc;
}

Histogram2D empty_brightness_histogram() {
  return Histogram2D(HistogramKind::kBrightness, BinAxis::uniform(0.0, 256.0, 256),
                     BinAxis::uniform(0.0, 256.0, 256), DisplayTransform::kLog1p);
}

Histogram2D brightness_joint_histogram(const RgbImage& left, const RgbImage& right,
                                       const DisparityMap& gt) {
  if (left.width != right.width || left.height != right.height) {
    throw DimensionError("left and right images differ in size");
  }
  require_same_shape(gt, left.width, left.height, "ground-truth disparity");

  Histogram2D acc = empty_brightness_histogram();
  Histogram2D tally = acc;
  const int w = left.width;
  const int rows = left.height;
  constexpr std::size_t kBins = 256 * 256;

#pragma omp parallel num_threads(thread_count())
  {
    std::vector<std::uint64_t> local(kBins, 0);
#pragma omp for schedule(static) nowait
    for (int v = 0; v < rows; ++v) {
      for (int u = 0; u < w; ++u) {
        if (!gt.valid(u, v)) continue;
        const double d = gt.at(u, v);
        if (!std::isfinite(d)) continue;
        const double ur = std::nearbyint(u - d);
        if (!(ur >= 0.0 && ur < w)) continue;
        const std::uint8_t* pl = left.pixel(u, v);
        const std::uint8_t* pr = right.pixel(static_cast<int>(ur), v);
        const int gl = gray8(pl[0], pl[1], pl[2]);
        const int gr = gray8(pr[0], pr[1], pr[2]);
        ++local[static_cast<std::size_t>(gr) * 256 + static_cast<std::size_t>(gl)];
      }
    }
#pragma omp critical(irs_brightness_hist)
    for (std::size_t i = 0; i < kBins; ++i) tally.counts[i] += local[i];
  }
  acc.add_sample(tally);
  return acc;
}

Histogram2D brightness_joint_histogram(std::span<const StereoSample> pairs) {
  if (pairs.empty()) throw EmptyInputError("no stereo pairs given");
  Histogram2D acc = empty_brightness_histogram();
  for (const auto& p : pairs) {
    if (!p.left || !p.right || !p.disparity) throw DomainError("incomplete stereo sample");
    merge_into(acc, brightness_joint_histogram(*p.left, *p.right, *p.disparity));
  }
  return acc;
}

OverexposureStats overexposure_stats(const Histogram2D& h) {
  if (h.x_axis.bins() != 256 || h.y_axis.bins() != 256) {
    throw DimensionError("overexposure statistics need a 256x256 brightness histogram");
  }
  std::uint64_t total = 0;
  std::uint64_t either = 0;
  for (int y = 0; y < 256; ++y) {
    for (int x = 0; x < 256; ++x) {
      const auto c = h.count(x, y);
      total += c;
      if (x == 255 || y == 255) either += c;
    }
  }
  if (total == 0) throw EmptyInputError("brightness histogram is empty");
  const auto both = h.count(255, 255);
  return {static_cast<double>(both) / static_cast<double>(total),
          static_cast<double>(either) / static_cast<double>(total)};
}

}  // namespace irs
