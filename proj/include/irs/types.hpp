#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "irs/error.hpp"

namespace irs {

template <typename T>
struct Vec3 {
  T x{};
  T y{};
  T z{};

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(T s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr bool operator==(const Vec3&) const = default;

  constexpr T dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  T norm() const { return std::sqrt(dot(*this)); }

  template <typename U>
  constexpr Vec3<U> cast() const {
    return {static_cast<U>(x), static_cast<U>(y), static_cast<U>(z)};
  }
};

using Vec3d = Vec3<double>;
using Vec3f = Vec3<float>;

inline Vec3d cross(const Vec3d& a, const Vec3d& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Dense row-major per-pixel map with a validity mask. `Tag` keeps disparity,
// depth and normal maps from being mixed up at compile time.
template <typename Tag, typename T>
class MaskedMap {
 public:
  using value_type = T;

  MaskedMap() = default;
  MaskedMap(int width, int height, T fill = T{}, bool valid = false)
      : width_(width), height_(height) {
    if (width < 0 || height < 0) throw DimensionError("negative map dimensions");
    values_.assign(size(), fill);
    mask_.assign(size(), valid ? 1 : 0);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool empty() const noexcept { return size() == 0; }

  std::size_t index(int u, int v) const noexcept {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(u);
  }
  bool in_bounds(int u, int v) const noexcept {
    return u >= 0 && v >= 0 && u < width_ && v < height_;
  }

  T& at(int u, int v) { return values_[index(u, v)]; }
  const T& at(int u, int v) const { return values_[index(u, v)]; }
  bool valid(int u, int v) const { return mask_[index(u, v)] != 0; }
  bool valid_at(std::size_t i) const { return mask_[i] != 0; }

  void set(int u, int v, T value) {
    values_[index(u, v)] = value;
    mask_[index(u, v)] = 1;
  }
  void invalidate(int u, int v) { mask_[index(u, v)] = 0; }
  void set_valid(std::size_t i, bool valid) { mask_[i] = valid ? 1 : 0; }

  std::vector<T>& values() noexcept { return values_; }
  const std::vector<T>& values() const noexcept { return values_; }
  std::vector<std::uint8_t>& mask() noexcept { return mask_; }
  const std::vector<std::uint8_t>& mask() const noexcept { return mask_; }

  std::size_t valid_count() const noexcept {
    std::size_t n = 0;
    for (auto m : mask_) n += m != 0;
    return n;
  }

  template <typename OtherTag, typename U>
  bool same_shape(const MaskedMap<OtherTag, U>& o) const noexcept {
    return width_ == o.width() && height_ == o.height();
  }

  bool operator==(const MaskedMap&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> values_;
  std::vector<std::uint8_t> mask_;
};

struct DisparityTag {};
struct DepthTag {};
struct NormalTag {};
struct ErrorTag {};

using DisparityMap = MaskedMap<DisparityTag, float>;  // pixels
using DepthMap = MaskedMap<DepthTag, float>;          // meters
using NormalMap = MaskedMap<NormalTag, Vec3f>;        // unit camera-frame normals
using ErrorMap = MaskedMap<ErrorTag, float>;          // per-pixel metric residuals

// Interleaved 8-bit RGB image.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // 3 * width * height

  RgbImage() = default;
  RgbImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, fill) {
    if (w < 0 || h < 0) throw DimensionError("negative image dimensions");
  }

  const std::uint8_t* pixel(int u, int v) const {
    return data.data() + (static_cast<std::size_t>(v) * width + u) * 3;
  }
  std::uint8_t* pixel(int u, int v) {
    return data.data() + (static_cast<std::size_t>(v) * width + u) * 3;
  }
  bool operator==(const RgbImage&) const = default;
};

template <typename Tag, typename T>
void require_same_shape(const MaskedMap<Tag, T>& a, int width, int height, const char* what) {
  if (a.width() != width || a.height() != height) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(width) + "x" +
                         std::to_string(height) + ", got " + std::to_string(a.width()) + "x" +
                         std::to_string(a.height()));
  }
}

}  // namespace irs
