#include "irs/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace irs {

using nlohmann::json;

namespace {

double number(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw DomainError(std::string(where) + ": missing required field '" + key + "'");
  }
  const auto& v = j.at(key);
  if (!v.is_number()) throw DomainError(std::string(where) + ": field '" + key + "' must be a number");
  return v.get<double>();
}

Vec3d vec3(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw DomainError(std::string(where) + ": missing field '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number()) {
    throw DomainError(std::string(where) + ": field '" + key + "' must be a 3-number array");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

json parse_text(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what(), e.byte);
  }
}

json vec_json(const Vec3d& v) { return json::array({v.x, v.y, v.z}); }

}  // namespace

StereoRig rig_from_json(const json& j) {
  StereoRig rig;
  rig.intrinsics.fx = number(j, "fx", "rig");
  rig.intrinsics.fy = number(j, "fy", "rig");
  rig.intrinsics.cx = number(j, "cx", "rig");
  rig.intrinsics.cy = number(j, "cy", "rig");
  rig.baseline = number(j, "baseline", "rig");
  rig.validate();
  return rig;
}

StereoRig parse_rig(std::string_view text) { return rig_from_json(parse_text(text, "rig JSON")); }

json rig_to_json(const StereoRig& rig) {
  return {{"fx", rig.intrinsics.fx}, {"fy", rig.intrinsics.fy}, {"cx", rig.intrinsics.cx},
          {"cy", rig.intrinsics.cy}, {"baseline", rig.baseline}};
}

SceneSpec scene_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("scene: expected an object");
  SceneSpec scene;
  if (j.contains("gain")) scene.gain = number(j, "gain", "scene");
  if (!j.contains("primitives") || !j.at("primitives").is_array()) {
    throw DomainError("scene: 'primitives' must be an array");
  }
  for (const auto& p : j.at("primitives")) {
    if (!p.is_object() || !p.contains("type") || !p.at("type").is_string()) {
      throw DomainError("scene: every primitive needs a string 'type'");
    }
    const auto type = p.at("type").get<std::string>();
    Primitive prim;
    if (type == "plane") {
      prim.shape = Plane{vec3(p, "point", "plane"), vec3(p, "normal", "plane")};
    } else if (type == "sphere") {
      prim.shape = Sphere{vec3(p, "center", "sphere"), number(p, "radius", "sphere")};
    } else if (type == "box") {
      prim.shape = Box{vec3(p, "min", "box"), vec3(p, "max", "box")};
    } else {
      throw DomainError("scene: unknown primitive type '" + type + "'");
    }
    if (p.contains("albedo")) {
      const Vec3d a = vec3(p, "albedo", type.c_str());
      prim.albedo = {a.x, a.y, a.z};
    }
    scene.primitives.push_back(prim);
  }
  scene.validate();
  return scene;
}

SceneSpec parse_scene(std::string_view text) { return scene_from_json(parse_text(text, "scene JSON")); }

json scene_to_json(const SceneSpec& scene) {
  json prims = json::array();
  for (const auto& p : scene.primitives) {
    json o;
    if (const auto* pl = std::get_if<Plane>(&p.shape)) {
      o = {{"type", "plane"}, {"point", vec_json(pl->point)}, {"normal", vec_json(pl->normal)}};
    } else if (const auto* s = std::get_if<Sphere>(&p.shape)) {
      o = {{"type", "sphere"}, {"center", vec_json(s->center)}, {"radius", s->radius}};
    } else if (const auto* b = std::get_if<Box>(&p.shape)) {
      o = {{"type", "box"}, {"min", vec_json(b->min)}, {"max", vec_json(b->max)}};
    }
    o["albedo"] = json::array({p.albedo[0], p.albedo[1], p.albedo[2]});
    prims.push_back(o);
  }
  return {{"gain", scene.gain}, {"primitives", prims}};
}

double round_sig9(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::strtod(buf, nullptr);
}

namespace {

json axis_json(const BinAxis& a) {
  json j = {{"lo", a.lo()}, {"hi", a.hi()}, {"bins", a.bins()}, {"uniform", a.is_uniform()}};
  if (!a.is_uniform()) j["edges"] = a.edges();
  return j;
}

BinAxis axis_from_json(const json& j) {
  if (j.contains("edges")) return BinAxis(j.at("edges").get<std::vector<double>>());
  return BinAxis::uniform(number(j, "lo", "axis"), number(j, "hi", "axis"),
                          static_cast<int>(number(j, "bins", "axis")));
}

}  // namespace

json histogram_to_json(const Histogram1D& h) {
  json j = {{"kind", to_string(h.kind)},
            {"dims", 1},
            {"bins", axis_json(h.axis)},
            {"transform", to_string(h.transform)},
            {"sample_count", h.sample_count},
            {"counts", h.counts},
            {"overflow", h.overflow},
            {"total", h.total()}};
  if (h.total() > 0) {
    auto f = h.normalized();
    for (auto& x : f) x = round_sig9(x);
    j["fractions"] = f;
    j["overflow_fraction"] = round_sig9(h.overflow_fraction());
  }
  return j;
}

json histogram_to_json(const Histogram2D& h) {
  const int nx = h.x_axis.bins();
  const int ny = h.y_axis.bins();
  json counts = json::array();
  json mass = json::array();
  for (int y = 0; y < ny; ++y) {
    json crow = json::array();
    json mrow = json::array();
    for (int x = 0; x < nx; ++x) {
      crow.push_back(h.count(x, y));
      mrow.push_back(h.mass[h.index(x, y)]);
    }
    counts.push_back(std::move(crow));
    mass.push_back(std::move(mrow));
  }
  return {{"kind", to_string(h.kind)},
          {"dims", 2},
          {"bins", {{"x", axis_json(h.x_axis)}, {"y", axis_json(h.y_axis)}}},
          {"layout", "counts[y_bin][x_bin]"},
          {"transform", to_string(h.transform)},
          {"sample_count", h.sample_count},
          {"counts", counts},
          {"mass", mass},
          {"overflow", h.overflow},
          {"overflow_mass", h.overflow_mass}};
}

Histogram1D histogram1d_from_json(const json& j) {
  Histogram1D h(histogram_kind_from_string(j.at("kind").get<std::string>()),
                axis_from_json(j.at("bins")),
                display_transform_from_string(j.at("transform").get<std::string>()));
  const auto counts = j.at("counts").get<std::vector<std::uint64_t>>();
  if (counts.size() != h.counts.size()) throw DimensionError("histogram counts do not match bins");
  h.counts = counts;
  h.overflow = j.at("overflow").get<std::uint64_t>();
  h.sample_count = j.at("sample_count").get<std::uint64_t>();
  return h;
}

Histogram2D histogram2d_from_json(const json& j) {
  Histogram2D h(histogram_kind_from_string(j.at("kind").get<std::string>()),
                axis_from_json(j.at("bins").at("x")), axis_from_json(j.at("bins").at("y")),
                display_transform_from_string(j.at("transform").get<std::string>()));
  const auto& counts = j.at("counts");
  const auto& mass = j.at("mass");
  const int nx = h.x_axis.bins();
  const int ny = h.y_axis.bins();
  if (!counts.is_array() || counts.size() != static_cast<std::size_t>(ny) || mass.size() != counts.size()) {
    throw DimensionError("histogram rows do not match bins");
  }
  for (int y = 0; y < ny; ++y) {
    const auto& crow = counts[static_cast<std::size_t>(y)];
    const auto& mrow = mass[static_cast<std::size_t>(y)];
    if (crow.size() != static_cast<std::size_t>(nx) || mrow.size() != crow.size()) {
      throw DimensionError("histogram columns do not match bins");
    }
    for (int x = 0; x < nx; ++x) {
      h.counts[h.index(x, y)] = crow[static_cast<std::size_t>(x)].get<std::uint64_t>();
      h.mass[h.index(x, y)] = mrow[static_cast<std::size_t>(x)].get<double>();
    }
  }
  h.overflow = j.at("overflow").get<std::uint64_t>();
  h.overflow_mass = j.at("overflow_mass").get<double>();
  h.sample_count = j.at("sample_count").get<std::uint64_t>();
  return h;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string histogram_to_csv(const Histogram1D& h) {
  const auto& e = h.axis.edges();
  const auto total = h.total();
  std::string out = "lo,hi,count,fraction\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double f = total ? static_cast<double>(h.counts[i]) / static_cast<double>(total) : 0.0;
    out += fmt(e[i]) + "," + fmt(e[i + 1]) + "," + std::to_string(h.counts[i]) + "," + fmt(f) + "\n";
  }
  const double of = total ? static_cast<double>(h.overflow) / static_cast<double>(total) : 0.0;
  out += "overflow,overflow," + std::to_string(h.overflow) + "," + fmt(of) + "\n";
  return out;
}

std::string histogram_to_csv(const Histogram2D& h) {
  const auto& xe = h.x_axis.edges();
  const auto& ye = h.y_axis.edges();
  const double samples = static_cast<double>(h.sample_count);
  std::string out = "x_lo,x_hi,y_lo,y_hi,count,mean_count,mean_fraction\n";
  for (int y = 0; y < h.y_axis.bins(); ++y) {
    for (int x = 0; x < h.x_axis.bins(); ++x) {
      const auto c = h.count(x, y);
      const double m = h.mass[h.index(x, y)];
      if (c == 0 && m == 0.0) continue;
      const auto xi = static_cast<std::size_t>(x);
      const auto yi = static_cast<std::size_t>(y);
      out += fmt(xe[xi]) + "," + fmt(xe[xi + 1]) + "," + fmt(ye[yi]) + "," + fmt(ye[yi + 1]) + "," +
             std::to_string(c) + "," + fmt(samples > 0 ? static_cast<double>(c) / samples : 0.0) +
             "," + fmt(samples > 0 ? m / samples : 0.0) + "\n";
    }
  }
  return out;
}

json normal_stats_to_json(const NormalErrorStats& s) {
  return {{"mean_deg", round_sig9(s.mean_deg)},
          {"median_deg", round_sig9(s.median_deg)},
          {"frac_11_25", round_sig9(s.frac_11_25)},
          {"frac_22_5", round_sig9(s.frac_22_5)},
          {"frac_30", round_sig9(s.frac_30)},
          {"pixel_count", s.pixel_count}};
}

}  // namespace irs
