#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstring>
#include <string>

#include "irs/io.hpp"

namespace irs {

namespace {

struct ReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
};

void read_callback(png_structp png, png_bytep out, png_size_t n) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->bytes.size() - cur->pos < n) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, cur->bytes.data() + cur->pos, n);
  cur->pos += n;
}

void write_callback(png_structp png, png_bytep data, png_size_t n) {
  auto* out = static_cast<Bytes*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + n);
}

void flush_callback(png_structp) {}

[[noreturn]] void error_callback(png_structp png, png_const_charp msg) {
  auto* buf = static_cast<std::string*>(png_get_error_ptr(png));
  *buf = msg;
  png_longjmp(png, 1);
}

void warning_callback(png_structp, png_const_charp) {}

struct DecodedPng {
  int width = 0;
  int height = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> rows;  // raw big-endian samples, RGB
};

// Decodes an RGB PNG of the requested bit depth; anything else is a FormatError.
DecodedPng decode_rgb(std::span<const std::uint8_t> bytes, int want_depth) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw ParseError("PNG: bad signature", 0);
  }
  std::string err;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, error_callback, warning_callback);
  if (!png) throw Error("PNG: cannot allocate decoder");
  png_infop info = png_create_info_struct(png);
  ReadCursor cursor{bytes, 0};
  DecodedPng out;
  volatile bool format_error = false;
  std::string format_msg;
  std::vector<png_bytep> ptrs;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("PNG: " + err, cursor.pos);
  }
  png_set_read_fn(png, &cursor, read_callback);
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color != PNG_COLOR_TYPE_RGB || depth != want_depth) {
    format_error = true;
    format_msg = "PNG: expected " + std::to_string(want_depth) + "-bit RGB, got colour type " +
                 std::to_string(color) + " at " + std::to_string(depth) + " bits";
  } else {
    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.bit_depth = depth;
    const std::size_t stride = png_get_rowbytes(png, info);
    out.rows.resize(stride * static_cast<std::size_t>(out.height));
    ptrs.resize(static_cast<std::size_t>(out.height));
    for (int y = 0; y < out.height; ++y) ptrs[static_cast<std::size_t>(y)] = out.rows.data() + stride * y;
    png_read_image(png, ptrs.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (format_error) throw FormatError(format_msg);
  return out;
}

Bytes encode_rgb(int width, int height, int depth, const std::vector<std::uint8_t>& rows) {
  if (width <= 0 || height <= 0) throw DimensionError("PNG: image must be non-empty");
  std::string err;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, error_callback, warning_callback);
  if (!png) throw Error("PNG: cannot allocate encoder");
  png_infop info = png_create_info_struct(png);
  Bytes out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("PNG: " + err);
  }
  png_set_write_fn(png, &out, write_callback, flush_callback);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), depth,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * 3 * (depth / 8);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(rows.data() + stride * y));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

}  // namespace

RgbImage read_png_rgb8(std::span<const std::uint8_t> bytes) {
  DecodedPng d = decode_rgb(bytes, 8);
  RgbImage img;
  img.width = d.width;
  img.height = d.height;
  img.data = std::move(d.rows);
  return img;
}

Bytes write_png_rgb8(const RgbImage& img) {
  return encode_rgb(img.width, img.height, 8, img.data);
}

std::uint16_t encode_normal_channel(double n) noexcept {
  const double q = std::nearbyint((n + 1.0) * 0.5 * 65535.0);
  return static_cast<std::uint16_t>(q < 0.0 ? 0.0 : (q > 65535.0 ? 65535.0 : q));
}

double decode_normal_channel(std::uint16_t q) noexcept {
  return static_cast<double>(q) / 65535.0 * 2.0 - 1.0;
}

Bytes write_png_normals16(const NormalMap& nm) {
  std::vector<std::uint8_t> rows(nm.size() * 6, 0);
  for (std::size_t i = 0; i < nm.size(); ++i) {
    if (!nm.valid_at(i)) continue;
    const Vec3f n = nm.values()[i];
    const std::uint16_t q[3] = {encode_normal_channel(n.x), encode_normal_channel(n.y),
                                encode_normal_channel(n.z)};
    for (int c = 0; c < 3; ++c) {
      rows[6 * i + 2 * c] = static_cast<std::uint8_t>(q[c] >> 8);
      rows[6 * i + 2 * c + 1] = static_cast<std::uint8_t>(q[c] & 0xff);
    }
  }
  return encode_rgb(nm.width(), nm.height(), 16, rows);
}

NormalMap read_png_normals16(std::span<const std::uint8_t> bytes) {
  const DecodedPng d = decode_rgb(bytes, 16);
  NormalMap nm(d.width, d.height);
  for (std::size_t i = 0; i < nm.size(); ++i) {
    std::uint16_t q[3];
    for (int c = 0; c < 3; ++c) {
      q[c] = static_cast<std::uint16_t>((d.rows[6 * i + 2 * c] << 8) | d.rows[6 * i + 2 * c + 1]);
    }
    if (q[0] == 0 && q[1] == 0 && q[2] == 0) continue;
    const Vec3d n{decode_normal_channel(q[0]), decode_normal_channel(q[1]),
                  decode_normal_channel(q[2])};
    const double len = n.norm();
    if (!(len > 0.0)) continue;
    nm.values()[i] = (n * (1.0 / len)).cast<float>();
    nm.set_valid(i, true);
  }
  return nm;
}

}  // namespace irs
