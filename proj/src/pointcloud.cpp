#include "irs/pointcloud.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <string>
#include <string_view>

#include "irs/parallel.hpp"

namespace irs {

void PointCloud::validate() const {
  if (colors && colors->size() != points.size()) {
    throw DimensionError("point cloud colour count differs from point count");
  }
  if (normals && normals->size() != points.size()) {
    throw DimensionError("point cloud normal count differs from point count");
  }
}

PointCloud reconstruct(const DisparityMap& dm, const RgbImage* rgb, const NormalMap* normals,
                       const StereoRig& rig) {
  rig.validate();
  if (rgb && (rgb->width != dm.width() || rgb->height != dm.height())) {
    throw DimensionError("colour image and disparity map differ in size");
  }
  if (normals) require_same_shape(*normals, dm.width(), dm.height(), "normal map");

  struct Row {
    std::vector<Point3D> points;
    std::vector<Rgb8> colors;
    std::vector<Vec3d> normals;
  };
  const int h = dm.height();
  const int w = dm.width();
  std::vector<Row> rows(static_cast<std::size_t>(h));

#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (int v = 0; v < h; ++v) {
    Row& row = rows[static_cast<std::size_t>(v)];
    for (int u = 0; u < w; ++u) {
      if (!dm.valid(u, v)) continue;
      const double d = dm.at(u, v);
      if (!std::isfinite(d) || d <= kEpsilonDisparity) continue;
      Vec3d n{};
      if (normals) {
        if (!normals->valid(u, v)) continue;
        n = normals->at(u, v).cast<double>();
        const double len = n.norm();
        if (!(len > 0.0) || !std::isfinite(len)) continue;
        n = n * (1.0 / len);
        row.normals.push_back(n);
      }
      row.points.push_back(backproject({static_cast<double>(u), static_cast<double>(v)},
                                       disparity_to_depth(d, rig), rig.intrinsics));
      if (rgb) {
        const std::uint8_t* p = rgb->pixel(u, v);
        row.colors.push_back({p[0], p[1], p[2]});
      }
    }
  }

  PointCloud pc;
  if (rgb) pc.colors.emplace();
  if (normals) pc.normals.emplace();
  for (auto& row : rows) {
    pc.points.insert(pc.points.end(), row.points.begin(), row.points.end());
    if (rgb) pc.colors->insert(pc.colors->end(), row.colors.begin(), row.colors.end());
    if (normals) pc.normals->insert(pc.normals->end(), row.normals.begin(), row.normals.end());
  }
  return pc;
}

namespace {

void append(Bytes& out, std::string_view s) { out.insert(out.end(), s.begin(), s.end()); }

void append_float_text(Bytes& out, double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), static_cast<float>(v));
  out.insert(out.end(), buf, r.ptr);
}

void append_float_le(Bytes& out, double v) {
  const auto f = static_cast<float>(v);
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  if constexpr (std::endian::native != std::endian::little) {
    bits = (bits >> 24) | ((bits >> 8) & 0xff00u) | ((bits << 8) & 0xff0000u) | (bits << 24);
  }
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

}  // namespace

Bytes export_ply(const PointCloud& pc, PlyFormat format) {
  pc.validate();
  const bool has_color = pc.colors.has_value();
  const bool has_normal = pc.normals.has_value();

  Bytes out;
  append(out, "ply\n");
  append(out, format == PlyFormat::kAscii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n");
  append(out, "element vertex " + std::to_string(pc.size()) + "\n");
  append(out, "property float x\nproperty float y\nproperty float z\n");
  if (has_color) append(out, "property uchar red\nproperty uchar green\nproperty uchar blue\n");
  if (has_normal) append(out, "property float nx\nproperty float ny\nproperty float nz\n");
  append(out, "end_header\n");

  for (std::size_t i = 0; i < pc.size(); ++i) {
    const Point3D& p = pc.points[i];
    if (format == PlyFormat::kAscii) {
      append_float_text(out, p.x);
      out.push_back(' ');
      append_float_text(out, p.y);
      out.push_back(' ');
      append_float_text(out, p.z);
      if (has_color) {
        const Rgb8 c = (*pc.colors)[i];
        append(out, " " + std::to_string(c.r) + " " + std::to_string(c.g) + " " + std::to_string(c.b));
      }
      if (has_normal) {
        const Vec3d& n = (*pc.normals)[i];
        for (double x : {n.x, n.y, n.z}) {
          out.push_back(' ');
          append_float_text(out, x);
        }
      }
      out.push_back('\n');
    } else {
      append_float_le(out, p.x);
      append_float_le(out, p.y);
      append_float_le(out, p.z);
      if (has_color) {
        const Rgb8 c = (*pc.colors)[i];
        out.push_back(c.r);
        out.push_back(c.g);
        out.push_back(c.b);
      }
      if (has_normal) {
        const Vec3d& n = (*pc.normals)[i];
        append_float_le(out, n.x);
        append_float_le(out, n.y);
        append_float_le(out, n.z);
      }
    }
  }
  return out;
}

namespace {

enum class PropType { kFloat, kUchar };

struct Property {
  std::string name;
  PropType type;
};

class Cursor {
 public:
  explicit Cursor(std::span<const std::uint8_t> b) : bytes_(b) {}

  std::size_t offset() const { return pos_; }
  bool done() const { return pos_ >= bytes_.size(); }

  std::string_view line() {
    if (done()) throw ParseError("PLY: header ended before end_header", pos_);
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
    if (pos_ >= bytes_.size()) throw ParseError("PLY: unterminated header line", start);
    std::size_t end = pos_;
    ++pos_;
    if (end > start && bytes_[end - 1] == '\r') --end;
    return {reinterpret_cast<const char*>(bytes_.data()) + start, end - start};
  }

  // Next whitespace-delimited token, or empty at end of input.
  std::string_view token() {
    while (pos_ < bytes_.size() && std::isspace(bytes_[pos_])) ++pos_;
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) ++pos_;
    return {reinterpret_cast<const char*>(bytes_.data()) + start, pos_ - start};
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }
  const std::uint8_t* take(std::size_t n) {
    const std::uint8_t* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

float read_float_le(const std::uint8_t* p) {
  std::uint32_t bits = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                       (static_cast<std::uint32_t>(p[2]) << 16) |
                       (static_cast<std::uint32_t>(p[3]) << 24);
  float f;
  std::memcpy(&f, &bits, 4);
  return f;
}

int slot_of(std::string_view name) {
  static constexpr std::string_view kNames[] = {"x", "y", "z", "red", "green", "blue", "nx", "ny", "nz"};
  for (int i = 0; i < 9; ++i) {
    if (kNames[i] == name) return i;
  }
  return -1;
}

}  // namespace

PointCloud import_ply(std::span<const std::uint8_t> bytes) {
  Cursor cur(bytes);
  if (cur.line() != "ply") throw ParseError("PLY: missing magic", 0);

  bool binary = false;
  bool have_format = false;
  long long vertex_count = -1;
  std::vector<Property> props;
  for (;;) {
    const std::size_t at = cur.offset();
    const auto words = split(cur.line());
    if (words.empty() || words[0] == "comment" || words[0] == "obj_info") continue;
    if (words[0] == "end_header") break;
    if (words[0] == "format") {
      if (words.size() != 3 || words[2] != "1.0") throw ParseError("PLY: bad format line", at);
      if (words[1] == "ascii") {
        binary = false;
      } else if (words[1] == "binary_little_endian") {
        binary = true;
      } else {
        throw FormatError("PLY: unsupported format " + std::string(words[1]));
      }
      have_format = true;
    } else if (words[0] == "element") {
      if (words.size() != 3) throw ParseError("PLY: bad element line", at);
      if (words[1] != "vertex" || vertex_count >= 0) {
        throw FormatError("PLY: only a single vertex element is supported");
      }
      const auto [ptr, ec] = std::from_chars(words[2].data(), words[2].data() + words[2].size(), vertex_count);
      if (ec != std::errc() || ptr != words[2].data() + words[2].size() || vertex_count < 0) {
        throw ParseError("PLY: bad vertex count", at);
      }
    } else if (words[0] == "property") {
      if (vertex_count < 0) throw ParseError("PLY: property before element", at);
      if (words.size() != 3) throw FormatError("PLY: list properties are not supported");
      PropType type;
      if (words[1] == "float" || words[1] == "float32") {
        type = PropType::kFloat;
      } else if (words[1] == "uchar" || words[1] == "uint8") {
        type = PropType::kUchar;
      } else {
        throw FormatError("PLY: unsupported property type " + std::string(words[1]));
      }
      const int slot = slot_of(words[2]);
      if (slot < 0) throw FormatError("PLY: unsupported property " + std::string(words[2]));
      if ((slot >= 3 && slot <= 5) != (type == PropType::kUchar)) {
        throw FormatError("PLY: property " + std::string(words[2]) + " has the wrong type");
      }
      for (const auto& p : props) {
        if (p.name == words[2]) throw ParseError("PLY: duplicate property", at);
      }
      props.push_back({std::string(words[2]), type});
    } else {
      throw ParseError("PLY: unexpected header line", at);
    }
  }
  if (!have_format) throw ParseError("PLY: missing format line", cur.offset());
  if (vertex_count < 0) throw ParseError("PLY: missing vertex element", cur.offset());

  bool present[9] = {};
  for (const auto& p : props) present[slot_of(p.name)] = true;
  if (!(present[0] && present[1] && present[2])) throw FormatError("PLY: x, y and z are required");
  const bool has_color = present[3] || present[4] || present[5];
  const bool has_normal = present[6] || present[7] || present[8];
  if (has_color && !(present[3] && present[4] && present[5])) {
    throw FormatError("PLY: colours need red, green and blue");
  }
  if (has_normal && !(present[6] && present[7] && present[8])) {
    throw FormatError("PLY: normals need nx, ny and nz");
  }

  std::size_t record = 0;
  for (const auto& p : props) record += p.type == PropType::kFloat ? 4 : 1;

  PointCloud pc;
  const auto n = static_cast<std::size_t>(vertex_count);
  if (binary && cur.remaining() / record < n) {
    const std::size_t complete = cur.remaining() / record;
    throw ParseError("PLY: body ends inside vertex " + std::to_string(complete) + " of " +
                         std::to_string(n),
                     cur.offset() + complete * record);
  }
  pc.points.resize(n);
  if (has_color) pc.colors.emplace(n);
  if (has_normal) pc.normals.emplace(n);

  for (std::size_t i = 0; i < n; ++i) {
    double slots[9] = {};
    for (const auto& p : props) {
      const int slot = slot_of(p.name);
      if (binary) {
        slots[slot] = p.type == PropType::kFloat ? static_cast<double>(read_float_le(cur.take(4)))
                                                 : static_cast<double>(*cur.take(1));
        continue;
      }
      const std::size_t at = cur.offset();
      const auto tok = cur.token();
      if (tok.empty()) {
        throw ParseError("PLY: body ends inside vertex " + std::to_string(i) + " of " +
                             std::to_string(n),
                         at);
      }
      if (p.type == PropType::kFloat) {
        float f;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), f);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
          throw ParseError("PLY: bad float in vertex " + std::to_string(i), at);
        }
        slots[slot] = f;
      } else {
        unsigned c;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), c);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || c > 255) {
          throw ParseError("PLY: bad colour in vertex " + std::to_string(i), at);
        }
        slots[slot] = c;
      }
    }
    pc.points[i] = {slots[0], slots[1], slots[2]};
    if (has_color) {
      (*pc.colors)[i] = {static_cast<std::uint8_t>(slots[3]), static_cast<std::uint8_t>(slots[4]),
                         static_cast<std::uint8_t>(slots[5])};
    }
    if (has_normal) (*pc.normals)[i] = {slots[6], slots[7], slots[8]};
  }
  return pc;
}

}  // namespace irs
