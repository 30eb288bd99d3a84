#include "irs/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

namespace irs {

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Bytes out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read " + path.string());
  return out;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

namespace {

bool is_space(std::uint8_t c) {
  return c == ' ' || c == '\n' || c == '\r' || c == '\t';
}

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> b) : bytes_(b) {}

  std::size_t offset() const { return pos_; }

  std::string token() {
    while (pos_ < bytes_.size() && is_space(bytes_[pos_])) ++pos_;
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !is_space(bytes_[pos_])) ++pos_;
    if (start == pos_) throw ParseError("PFM: truncated header", pos_);
    return std::string(reinterpret_cast<const char*>(bytes_.data()) + start, pos_ - start);
  }

  // The single whitespace byte terminating the header.
  void terminator() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw ParseError("PFM: missing whitespace after scale", pos_);
    }
    ++pos_;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

template <typename T>
T parse_number(const std::string& s, std::size_t offset, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(std::string("PFM: bad ") + what + " '" + s + "'", offset);
  }
  return value;
}

std::uint32_t byteswap32(std::uint32_t v) {
  return (v >> 24) | ((v >> 8) & 0xff00u) | ((v << 8) & 0xff0000u) | (v << 24);
}

}  // namespace

PfmImage read_pfm(std::span<const std::uint8_t> bytes) {
  HeaderReader hr(bytes);
  const std::string magic = hr.token();
  PfmImage img;
  if (magic == "PF") {
    img.channels = 3;
  } else if (magic == "Pf") {
    img.channels = 1;
  } else {
    throw ParseError("PFM: bad magic '" + magic + "'", 0);
  }
  std::size_t at = hr.offset();
  const auto w = parse_number<long long>(hr.token(), at, "width");
  at = hr.offset();
  const auto h = parse_number<long long>(hr.token(), at, "height");
  at = hr.offset();
  img.scale = parse_number<float>(hr.token(), at, "scale");
  hr.terminator();

  constexpr long long kMaxDim = std::numeric_limits<int>::max();
  if (w <= 0 || h <= 0 || w > kMaxDim || h > kMaxDim) {
    throw ParseError("PFM: invalid dimensions " + std::to_string(w) + "x" + std::to_string(h), at);
  }
  if (img.scale == 0.0f || !std::isfinite(img.scale)) throw ParseError("PFM: zero scale", at);
  const auto floats = static_cast<unsigned long long>(w) * static_cast<unsigned long long>(h) *
                      static_cast<unsigned long long>(img.channels);
  if (floats > std::numeric_limits<std::size_t>::max() / 8) {
    throw ParseError("PFM: dimensions overflow", at);
  }
  const std::size_t payload = static_cast<std::size_t>(floats) * 4;
  const std::size_t start = hr.offset();
  if (bytes.size() - start < payload) {
    throw ParseError("PFM: payload has " + std::to_string(bytes.size() - start) +
                         " bytes, header needs " + std::to_string(payload),
                     bytes.size());
  }

  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  img.values.resize(static_cast<std::size_t>(floats));
  const bool swap = (img.scale < 0.0f) != (std::endian::native == std::endian::little);
  const std::size_t row_floats = static_cast<std::size_t>(img.width) * img.channels;
  for (int row = 0; row < img.height; ++row) {
    // Disk row 0 is the bottom image row.
    const std::uint8_t* src = bytes.data() + start + static_cast<std::size_t>(row) * row_floats * 4;
    float* dst = img.values.data() + static_cast<std::size_t>(img.height - 1 - row) * row_floats;
    for (std::size_t i = 0; i < row_floats; ++i) {
      std::uint32_t bits;
      std::memcpy(&bits, src + 4 * i, 4);
      if (swap) bits = byteswap32(bits);
      std::memcpy(dst + i, &bits, 4);
    }
  }
  return img;
}

Bytes write_pfm(const PfmImage& img) {
  if (img.channels != 1 && img.channels != 3) throw FormatError("PFM supports 1 or 3 channels");
  const std::size_t row_floats = static_cast<std::size_t>(img.width) * img.channels;
  if (img.width <= 0 || img.height <= 0 || img.values.size() != row_floats * img.height) {
    throw DimensionError("PFM image size does not match its values");
  }
  char scale_buf[32];
  const float scale = -std::abs(img.scale == 0.0f ? 1.0f : img.scale);
  const auto res = std::to_chars(scale_buf, scale_buf + sizeof(scale_buf), scale);
  std::string header = img.channels == 3 ? "PF\n" : "Pf\n";
  header += std::to_string(img.width) + " " + std::to_string(img.height) + "\n";
  header.append(scale_buf, res.ptr);
  header += "\n";

  Bytes out(header.begin(), header.end());
  const std::size_t start = out.size();
  out.resize(start + img.values.size() * 4);
  const bool swap = std::endian::native != std::endian::little;
  for (int row = 0; row < img.height; ++row) {
    const float* src = img.values.data() + static_cast<std::size_t>(img.height - 1 - row) * row_floats;
    std::uint8_t* dst = out.data() + start + static_cast<std::size_t>(row) * row_floats * 4;
    for (std::size_t i = 0; i < row_floats; ++i) {
      std::uint32_t bits;
      std::memcpy(&bits, src + i, 4);
      if (swap) bits = byteswap32(bits);
      std::memcpy(dst + 4 * i, &bits, 4);
    }
  }
  return out;
}

namespace {

constexpr float kNaN = std::numeric_limits<float>::quiet_NaN();

template <typename Map>
Map scalar_from_pfm(const PfmImage& img, const char* what) {
  if (img.channels != 1) throw FormatError(std::string(what) + " PFM must have 1 channel");
  Map m(img.width, img.height);
  for (std::size_t i = 0; i < img.values.size(); ++i) {
    const float x = img.values[i];
    m.values()[i] = x;
    m.set_valid(i, std::isfinite(x) && x > 0.0f);
  }
  return m;
}

template <typename Map>
PfmImage scalar_to_pfm(const Map& m) {
  PfmImage img{m.width(), m.height(), 1, -1.0f, std::vector<float>(m.size())};
  for (std::size_t i = 0; i < m.size(); ++i) {
    img.values[i] = m.valid_at(i) ? m.values()[i] : kNaN;
  }
  return img;
}

}  // namespace

DisparityMap disparity_from_pfm(const PfmImage& img) {
  return scalar_from_pfm<DisparityMap>(img, "disparity");
}

DepthMap depth_from_pfm(const PfmImage& img) { return scalar_from_pfm<DepthMap>(img, "depth"); }

NormalMap normals_from_pfm(const PfmImage& img) {
  if (img.channels != 3) throw FormatError("normal PFM must have 3 channels");
  NormalMap m(img.width, img.height);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Vec3f n{img.values[3 * i], img.values[3 * i + 1], img.values[3 * i + 2]};
    m.values()[i] = n;
    m.set_valid(i, std::isfinite(n.x) && std::isfinite(n.y) && std::isfinite(n.z));
  }
  return m;
}

PfmImage to_pfm(const DisparityMap& m) { return scalar_to_pfm(m); }
PfmImage to_pfm(const DepthMap& m) { return scalar_to_pfm(m); }
PfmImage to_pfm(const ErrorMap& m) { return scalar_to_pfm(m); }

PfmImage to_pfm(const NormalMap& m) {
  PfmImage img{m.width(), m.height(), 3, -1.0f, std::vector<float>(m.size() * 3)};
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Vec3f n = m.valid_at(i) ? m.values()[i] : Vec3f{kNaN, kNaN, kNaN};
    img.values[3 * i] = n.x;
    img.values[3 * i + 1] = n.y;
    img.values[3 * i + 2] = n.z;
  }
  return img;
}

}  // namespace irs
