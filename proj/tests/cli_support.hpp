#pragma once

// Temp directories, an in-process CLI runner and a small synthetic dataset.

#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "irs/cli.hpp"
#include "irs/io.hpp"
#include "irs/json_io.hpp"
#include "irs/parallel.hpp"
#include "irs/synth.hpp"
#include "support.hpp"

namespace irs::test {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("irs_" + tag + "_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  std::string operator/(const std::string& rel) const { return (path_ / rel).string(); }

 private:
  fs::path path_;
};

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

inline CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "irs");
  std::ostringstream out, err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  const int saved_threads = thread_count();
  CliResult r;
  r.code = cli::run(args);
  set_thread_count(saved_threads);
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

inline void write_string(const fs::path& p, const std::string& s) {
  write_file(p, std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

inline std::string read_string(const fs::path& p) {
  const Bytes b = read_file(p);
  return {b.begin(), b.end()};
}

// Every regular file under `root`, keyed by relative path.
inline std::map<std::string, Bytes> snapshot(const fs::path& root) {
  std::map<std::string, Bytes> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = read_file(e.path());
  }
  return out;
}

inline StereoRig fixture_rig() { return make_rig(96, 96, 39.5, 29.5, 0.12); }

inline SceneSpec fixture_scene(int i) {
  std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(i));
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  SceneSpec s;
  s.gain = 1.2 + 0.3 * i;
  s.primitives.push_back(plane({0, 0, 4.0 + i}, random_camera_facing_normal(rng, 35), {0.9, 0.8, 0.7}));
  s.primitives.push_back(Primitive{Sphere{{u(rng), u(rng), 2.2 + 0.2 * i}, 0.5}, {1.0, 0.9, 0.8}});
  s.primitives.push_back(Primitive{Box{{-1.4, 0.4, 2.5}, {-0.6, 1.2, 3.3}}, {0.3, 0.9, 0.5}});
  return s;
}

// Writes a dataset with left/, right/, disp/, normal/ and pred/ directories
// sharing stems s0..s{n-1}, plus rig.json and scene.json.
inline void make_dataset(const fs::path& root, int n, int width = 80, int height = 60) {
  const StereoRig rig = fixture_rig();
  write_string(root / "rig.json", rig_to_json(rig).dump());
  write_string(root / "scene.json", scene_to_json(fixture_scene(0)).dump(2));
  for (const char* d : {"left", "right", "disp", "normal", "pred", "pred_normal"}) {
    fs::create_directories(root / d);
  }
  std::mt19937_64 rng(7);
  std::normal_distribution<float> noise(0.0f, 0.4f);
  for (int i = 0; i < n; ++i) {
    const std::string stem = "s" + std::to_string(i);
    const RenderOutput r = render_stereo(fixture_scene(i), rig, width, height);
    write_file(root / "left" / (stem + ".png"), write_png_rgb8(r.left_rgb));
    write_file(root / "right" / (stem + ".png"), write_png_rgb8(r.right_rgb));
    write_file(root / "disp" / (stem + ".pfm"), write_pfm(to_pfm(r.gt_disparity)));
    write_file(root / "normal" / (stem + ".pfm"), write_pfm(to_pfm(r.gt_normal)));
    DisparityMap pred = r.gt_disparity;
    for (auto& d : pred.values()) d += noise(rng);
    write_file(root / "pred" / (stem + ".pfm"), write_pfm(to_pfm(pred)));
    NormalMap pn = r.gt_normal;
    for (auto& v : pn.values()) {
      Vec3f w{v.x + noise(rng) * 0.2f, v.y + noise(rng) * 0.2f, v.z};
      v = w * (1.0f / w.norm());
    }
    write_file(root / "pred_normal" / (stem + ".pfm"), write_pfm(to_pfm(pn)));
  }
}

// One invocation per subcommand, with outputs under `out`.
inline std::vector<std::vector<std::string>> all_subcommands(const fs::path& data, const fs::path& out) {
  const auto d = [&](const std::string& rel) { return (data / rel).string(); };
  const auto o = [&](const std::string& rel) { return (out / rel).string(); };
  return {
      {"d2n", "--disp", d("disp"), "--rig", d("rig.json"), "--out", o("d2n")},
      {"d2n", "--disp", d("disp/s0.pfm"), "--rig", d("rig.json"), "--out", o("n0.png"), "--format", "png"},
      {"stats", "normal", "--normal", d("normal"), "--out", o("normal_hist.json"), "--csv", o("normal_hist.csv")},
      {"stats", "disparity", "--disp", d("disp"), "--out", o("disp_hist.json"), "--csv", o("disp_hist.csv")},
      {"stats", "brightness", "--left", d("left"), "--right", d("right"), "--disp", d("disp"), "--out",
       o("bright.json"), "--csv", o("bright.csv")},
      {"eval", "disparity", "--pred", d("pred"), "--gt", d("disp"), "--error-map", o("epe_maps"), "--out",
       o("epe.json")},
      {"eval", "normal", "--pred", d("pred_normal"), "--gt", d("normal"), "--error-map", o("angle_maps"),
       "--out", o("angle.json")},
      {"pcd", "--disp", d("pred/s0.pfm"), "--left", d("left/s0.png"), "--normal", d("normal/s0.pfm"), "--rig",
       d("rig.json"), "--out", o("cloud.ply")},
      {"pcd", "--disp", d("disp/s1.pfm"), "--rig", d("rig.json"), "--out", o("cloud.txt.ply"), "--format",
       "ascii"},
      {"synth", "--scene", d("scene.json"), "--rig", d("rig.json"), "--width", "64", "--height", "48", "--out",
       o("synth"), "--normal-png"},
      {"loss", "--gt", d("disp/s0.pfm"), "--pred", d("pred/s0.pfm"), "--pred-normal", d("pred_normal/s0.pfm"),
       "--gt-normal", d("normal/s0.pfm")},
  };
}

}  // namespace irs::test
