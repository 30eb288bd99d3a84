#include "irs/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "irs/error.hpp"

namespace irs {

BinAxis::BinAxis(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.size() < 2) throw DomainError("a bin axis needs at least two edges");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!std::isfinite(edges_[i])) throw DomainError("bin edges must be finite");
    if (i > 0 && !(edges_[i] > edges_[i - 1])) {
      throw DomainError("bin edges must be strictly increasing");
    }
  }
}

BinAxis BinAxis::uniform(double lo, double hi, int bins) {
  if (bins < 1) throw DomainError("bin count must be positive");
  if (!(hi > lo)) throw DomainError("bin range must be non-empty");
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) {
    edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
  }
  edges.back() = hi;
  BinAxis axis(std::move(edges));
  axis.uniform_ = true;
  return axis;
}

std::optional<int> BinAxis::bin_of(double value) const noexcept {
  if (!(value >= lo() && value <= hi())) return std::nullopt;
  const int n = bins();
  if (value == hi()) return n - 1;
  if (uniform_) {
    const double pos = (value - lo()) * n / (hi() - lo());
    return std::clamp(static_cast<int>(std::floor(pos)), 0, n - 1);
  }
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), value);
  return static_cast<int>(it - edges_.begin()) - 1;
}

std::string_view to_string(HistogramKind k) {
  switch (k) {
    case HistogramKind::kDisparity: return "disparity";
    case HistogramKind::kNormalAngle: return "normal_angle";
    case HistogramKind::kBrightness: return "brightness_joint";
    case HistogramKind::kGeneric: break;
  }
  return "generic";
}

std::string_view to_string(DisplayTransform t) {
  return t == DisplayTransform::kLog1p ? "log1p" : "none";
}

HistogramKind histogram_kind_from_string(std::string_view s) {
  for (auto k : {HistogramKind::kGeneric, HistogramKind::kDisparity, HistogramKind::kNormalAngle,
                 HistogramKind::kBrightness}) {
    if (to_string(k) == s) return k;
  }
  throw DomainError("unknown histogram kind '" + std::string(s) + "'");
}

DisplayTransform display_transform_from_string(std::string_view s) {
  if (s == "none") return DisplayTransform::kNone;
  if (s == "log1p") return DisplayTransform::kLog1p;
  throw DomainError("unknown display transform '" + std::string(s) + "'");
}

Histogram1D::Histogram1D(HistogramKind k, BinAxis a, DisplayTransform t)
    : kind(k), transform(t), axis(std::move(a)),
      counts(static_cast<std::size_t>(axis.bins()), 0) {}

void Histogram1D::add(double value) noexcept {
  if (const auto b = axis.bin_of(value)) {
    ++counts[static_cast<std::size_t>(*b)];
  } else {
    ++overflow;
  }
}

std::uint64_t Histogram1D::total() const noexcept {
  std::uint64_t t = overflow;
  for (auto c : counts) t += c;
  return t;
}

std::vector<double> Histogram1D::normalized() const {
  const auto t = total();
  if (t == 0) throw EmptyInputError("histogram is empty");
  std::vector<double> out(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out[i] = static_cast<double>(counts[i]) / static_cast<double>(t);
  }
  return out;
}

double Histogram1D::overflow_fraction() const {
  const auto t = total();
  if (t == 0) throw EmptyInputError("histogram is empty");
  return static_cast<double>(overflow) / static_cast<double>(t);
}

Histogram2D::Histogram2D(HistogramKind k, BinAxis xa, BinAxis ya, DisplayTransform t)
    : kind(k), transform(t), x_axis(std::move(xa)), y_axis(std::move(ya)) {
  const auto n = static_cast<std::size_t>(x_axis.bins()) * static_cast<std::size_t>(y_axis.bins());
  counts.assign(n, 0);
  mass.assign(n, 0.0);
}

void Histogram2D::add(double x, double y) noexcept {
  const auto xb = x_axis.bin_of(x);
  const auto yb = y_axis.bin_of(y);
  if (xb && yb) {
    ++counts[index(*xb, *yb)];
  } else {
    ++overflow;
  }
}

void Histogram2D::add_sample(const Histogram2D& sample) {
  if (!(sample.x_axis == x_axis) || !(sample.y_axis == y_axis)) {
    throw IncompatibleError("sample binning differs from the accumulator");
  }
  const auto t = sample.total();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    counts[i] += sample.counts[i];
    if (t > 0 && sample.counts[i] > 0) {
      mass[i] += static_cast<double>(sample.counts[i]) / static_cast<double>(t);
    }
  }
  overflow += sample.overflow;
  if (t > 0 && sample.overflow > 0) {
    overflow_mass += static_cast<double>(sample.overflow) / static_cast<double>(t);
  }
  ++sample_count;
}

std::uint64_t Histogram2D::total() const noexcept {
  std::uint64_t t = overflow;
  for (auto c : counts) t += c;
  return t;
}

std::vector<double> Histogram2D::mean_counts() const {
  if (sample_count == 0) throw EmptyInputError("histogram has no samples");
  std::vector<double> out(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out[i] = static_cast<double>(counts[i]) / static_cast<double>(sample_count);
  }
  return out;
}

std::vector<double> Histogram2D::mean_fraction() const {
  if (sample_count == 0) throw EmptyInputError("histogram has no samples");
  std::vector<double> out(mass.size());
  for (std::size_t i = 0; i < mass.size(); ++i) {
    out[i] = mass[i] / static_cast<double>(sample_count);
  }
  return out;
}

double Histogram2D::mean_overflow_fraction() const {
  if (sample_count == 0) throw EmptyInputError("histogram has no samples");
  return overflow_mass / static_cast<double>(sample_count);
}

namespace {

template <typename H>
void check_compatible(const H& a, const H& b) {
  if (a.kind != b.kind) throw IncompatibleError("histogram kinds differ");
  if (a.transform != b.transform) throw IncompatibleError("display transforms differ");
}

}  // namespace

void merge_into(Histogram1D& acc, const Histogram1D& b) {
  check_compatible(acc, b);
  if (!(acc.axis == b.axis)) throw IncompatibleError("bin edges differ");
  for (std::size_t i = 0; i < acc.counts.size(); ++i) acc.counts[i] += b.counts[i];
  acc.overflow += b.overflow;
  acc.sample_count += b.sample_count;
}

void merge_into(Histogram2D& acc, const Histogram2D& b) {
  check_compatible(acc, b);
  if (!(acc.x_axis == b.x_axis) || !(acc.y_axis == b.y_axis)) {
    throw IncompatibleError("bin edges differ");
  }
  for (std::size_t i = 0; i < acc.counts.size(); ++i) {
    acc.counts[i] += b.counts[i];
    acc.mass[i] += b.mass[i];
  }
  acc.overflow += b.overflow;
  acc.overflow_mass += b.overflow_mass;
  acc.sample_count += b.sample_count;
}

Histogram1D merge_histograms(const Histogram1D& a, const Histogram1D& b) {
  Histogram1D out = a;
  merge_into(out, b);
  return out;
}

Histogram2D merge_histograms(const Histogram2D& a, const Histogram2D& b) {
  Histogram2D out = a;
  merge_into(out, b);
  return out;
}

}  // namespace irs
