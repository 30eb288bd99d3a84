#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "irs/types.hpp"

namespace irs {

using Bytes = std::vector<std::uint8_t>;

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// ---- PFM ----------------------------------------------------------------
//
// Header "PF" (3 channels) or "Pf" (1 channel), width, height and scale, each
// followed by one whitespace byte. A negative scale marks a little-endian
// payload. Rows are stored bottom-to-top on disk; `values` holds them
// top-to-bottom, channels interleaved. The scale magnitude is kept as read and
// is not applied to the values.
struct PfmImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  float scale = -1.0f;
  std::vector<float> values;

  float& at(int u, int v, int c = 0) {
    return values[(static_cast<std::size_t>(v) * width + u) * channels + c];
  }
  float at(int u, int v, int c = 0) const {
    return values[(static_cast<std::size_t>(v) * width + u) * channels + c];
  }
};

PfmImage read_pfm(std::span<const std::uint8_t> bytes);
// Always little-endian ("-|scale|"), rows bottom-to-top. Canonical headers are
// "P?\n<w> <h>\n<scale>\n" with the scale in shortest round-trip form.
Bytes write_pfm(const PfmImage& img);

// NaN marks invalid pixels on disk. Disparity and depth additionally treat
// non-positive values as invalid when reading.
DisparityMap disparity_from_pfm(const PfmImage& img);
DepthMap depth_from_pfm(const PfmImage& img);
NormalMap normals_from_pfm(const PfmImage& img);
PfmImage to_pfm(const DisparityMap& m);
PfmImage to_pfm(const DepthMap& m);
PfmImage to_pfm(const NormalMap& m);
PfmImage to_pfm(const ErrorMap& m);

// ---- PNG ----------------------------------------------------------------

// 8-bit RGB only; other bit depths and colour types throw FormatError.
RgbImage read_png_rgb8(std::span<const std::uint8_t> bytes);
Bytes write_png_rgb8(const RgbImage& img);

// Normals as 16-bit RGB with channel = round((n + 1) / 2 * 65535). Invalid
// pixels are written as (0, 0, 0), which no unit normal encodes to.
Bytes write_png_normals16(const NormalMap& nm);
// Decodes n = value / 65535 * 2 - 1 and renormalizes.
NormalMap read_png_normals16(std::span<const std::uint8_t> bytes);

std::uint16_t encode_normal_channel(double n) noexcept;
double decode_normal_channel(std::uint16_t q) noexcept;

}  // namespace irs
