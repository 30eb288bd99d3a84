#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "irs/camera.hpp"
#include "irs/io.hpp"
#include "irs/types.hpp"

namespace irs {

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb8&) const = default;
};

struct PointCloud {
  std::vector<Point3D> points;
  std::optional<std::vector<Rgb8>> colors;
  std::optional<std::vector<Vec3d>> normals;

  std::size_t size() const noexcept { return points.size(); }
  // Attribute lengths must match the point count.
  void validate() const;
};

// One point per pixel with a valid disparity (and a valid normal, when a
// normal map is given), in row-major pixel order.
PointCloud reconstruct(const DisparityMap& dm, const RgbImage* rgb, const NormalMap* normals,
                       const StereoRig& rig);

enum class PlyFormat { kAscii, kBinaryLittleEndian };

// Vertex properties x y z [red green blue] [nx ny nz]; float32 and uchar.
Bytes export_ply(const PointCloud& pc, PlyFormat format);
PointCloud import_ply(std::span<const std::uint8_t> bytes);

}  // namespace irs
