#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace irs {

// Bin boundaries along one axis. Values equal to the last edge fall into the
// last bin; anything else outside [front, back] is overflow.
class BinAxis {
 public:
  BinAxis() = default;
  // Throws DomainError unless edges has >= 2 strictly increasing finite entries.
  explicit BinAxis(std::vector<double> edges);
  static BinAxis uniform(double lo, double hi, int bins);

  int bins() const noexcept { return static_cast<int>(edges_.size()) - 1; }
  double lo() const noexcept { return edges_.front(); }
  double hi() const noexcept { return edges_.back(); }
  bool is_uniform() const noexcept { return uniform_; }
  const std::vector<double>& edges() const noexcept { return edges_; }

  std::optional<int> bin_of(double value) const noexcept;

  bool operator==(const BinAxis& o) const noexcept { return edges_ == o.edges_; }

 private:
  std::vector<double> edges_;
  bool uniform_ = false;
};

enum class HistogramKind { kGeneric, kDisparity, kNormalAngle, kBrightness };
enum class DisplayTransform { kNone, kLog1p };

std::string_view to_string(HistogramKind k);
std::string_view to_string(DisplayTransform t);
HistogramKind histogram_kind_from_string(std::string_view s);
DisplayTransform display_transform_from_string(std::string_view s);

// Pooled 1D tally. normalized() divides by every tallied value, overflow included.
struct Histogram1D {
  HistogramKind kind = HistogramKind::kGeneric;
  DisplayTransform transform = DisplayTransform::kNone;
  BinAxis axis;
  std::vector<std::uint64_t> counts;
  std::uint64_t overflow = 0;
  std::uint64_t sample_count = 0;

  Histogram1D() = default;
  Histogram1D(HistogramKind kind, BinAxis axis, DisplayTransform transform = DisplayTransform::kNone);

  void add(double value) noexcept;
  std::uint64_t total() const noexcept;
  std::vector<double> normalized() const;
  double overflow_fraction() const;

  bool operator==(const Histogram1D&) const = default;
};

// 2D tally, row-major with y as the row: index = y_bin * x_bins + x_bin.
//
// Two accumulators are kept side by side. `counts` pools raw integer tallies
// over samples; `mass` sums each sample's own normalized distribution, so
// mass / sample_count is the per-sample-then-averaged distribution. The
// display transform is metadata only and is never applied to either.
struct Histogram2D {
  HistogramKind kind = HistogramKind::kGeneric;
  DisplayTransform transform = DisplayTransform::kNone;
  BinAxis x_axis;
  BinAxis y_axis;
  std::vector<std::uint64_t> counts;
  std::vector<double> mass;
  std::uint64_t overflow = 0;
  double overflow_mass = 0.0;
  std::uint64_t sample_count = 0;

  Histogram2D() = default;
  Histogram2D(HistogramKind kind, BinAxis x_axis, BinAxis y_axis,
              DisplayTransform transform = DisplayTransform::kNone);

  std::size_t index(int xb, int yb) const noexcept {
    return static_cast<std::size_t>(yb) * static_cast<std::size_t>(x_axis.bins()) +
           static_cast<std::size_t>(xb);
  }
  std::uint64_t count(int xb, int yb) const { return counts[index(xb, yb)]; }

  // Tallies one value into `counts` only.
  void add(double x, double y) noexcept;
  // Closes a sample whose raw tallies are in `sample`: adds its counts and its
  // normalized distribution. A sample with no tallies still counts as a sample.
  void add_sample(const Histogram2D& sample);

  std::uint64_t total() const noexcept;
  std::vector<double> mean_counts() const;    // counts / sample_count
  std::vector<double> mean_fraction() const;  // mass / sample_count
  double mean_overflow_fraction() const;

  bool operator==(const Histogram2D&) const = default;
};

// Adds counts (and masses); requires identical kind, binning and transform.
Histogram1D merge_histograms(const Histogram1D& a, const Histogram1D& b);
Histogram2D merge_histograms(const Histogram2D& a, const Histogram2D& b);
void merge_into(Histogram1D& acc, const Histogram1D& b);
void merge_into(Histogram2D& acc, const Histogram2D& b);

}  // namespace irs
