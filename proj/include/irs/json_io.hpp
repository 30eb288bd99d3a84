#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "irs/camera.hpp"
#include "irs/histogram.hpp"
#include "irs/metrics.hpp"
#include "irs/synth.hpp"

namespace irs {

// {"fx":..,"fy":..,"cx":..,"cy":..,"baseline":..}; every field required.
StereoRig rig_from_json(const nlohmann::json& j);
StereoRig parse_rig(std::string_view text);
nlohmann::json rig_to_json(const StereoRig& rig);

// {"gain": 1.0, "primitives": [
//    {"type":"plane",  "point":[x,y,z], "normal":[x,y,z], "albedo":[r,g,b]},
//    {"type":"sphere", "center":[x,y,z], "radius":r, ...},
//    {"type":"box",    "min":[x,y,z], "max":[x,y,z], ...}]}
// "gain" and "albedo" are optional (1.0 and [1,1,1]).
SceneSpec scene_from_json(const nlohmann::json& j);
SceneSpec parse_scene(std::string_view text);
nlohmann::json scene_to_json(const SceneSpec& scene);

// Rounds to 9 significant digits so printed metrics are stable and short.
double round_sig9(double v);

nlohmann::json histogram_to_json(const Histogram1D& h);
nlohmann::json histogram_to_json(const Histogram2D& h);
Histogram1D histogram1d_from_json(const nlohmann::json& j);
Histogram2D histogram2d_from_json(const nlohmann::json& j);

// Columns: lo,hi,count,fraction; a final "overflow" row.
std::string histogram_to_csv(const Histogram1D& h);
// Columns: x_lo,x_hi,y_lo,y_hi,count,mean_count,mean_fraction; non-empty bins only.
std::string histogram_to_csv(const Histogram2D& h);

nlohmann::json normal_stats_to_json(const NormalErrorStats& s);

}  // namespace irs
