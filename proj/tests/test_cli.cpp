#include <doctest.h>

#include <json.hpp>

#include "cli_support.hpp"
#include "irs/d2n.hpp"
#include "irs/dataset_stats.hpp"
#include "irs/metrics.hpp"
#include "irs/pointcloud.hpp"

using namespace irs;
using namespace irs::test;
using nlohmann::json;

namespace {

const TempDir& dataset() {
  static const TempDir dir("cli_data");
  static const bool made = (make_dataset(dir.path(), 3), true);
  (void)made;
  return dir;
}

std::string data(const std::string& rel) { return dataset() / rel; }

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli({}).code == cli::kUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kUsage);
  CHECK(run_cli({"d2n", "--disp", "x.pfm"}).code == cli::kUsage);
  CHECK(run_cli({"d2n", "--disp", "x", "--rig", "r", "--out", "o", "--bogus"}).code == cli::kUsage);
  CHECK(run_cli({"--threads", "0", "synth"}).code == cli::kUsage);
  CHECK(run_cli({"d2n", "--disp", "x", "--rig", "r", "--out", "o", "--slope", "median"}).code == cli::kUsage);
  CHECK(run_cli({"loss", "--gt", data("disp/s0.pfm"), "--pred", data("pred/s0.pfm"), "--weights", "1,2"}).code ==
        cli::kUsage);
  CHECK(run_cli({"loss", "--gt", data("disp/s0.pfm"), "--pred", data("pred/s0.pfm"), data("pred/s1.pfm")}).code ==
        cli::kUsage);
  CHECK(run_cli({"loss", "--gt", data("disp/s0.pfm"), "--pred", data("pred/s0.pfm"), "--pred-normal",
                 data("normal/s0.pfm")})
            .code == cli::kUsage);
  CHECK(run_cli({"--help"}).code == cli::kOk);
}

TEST_CASE("missing files exit with 3, bad data with 4") {
  TempDir out("cli_err");
  auto r = run_cli({"d2n", "--disp", out / "missing.pfm", "--rig", data("rig.json"), "--out", out / "n.pfm"});
  CHECK(r.code == cli::kIo);
  CHECK(r.err.find("missing.pfm") != std::string::npos);
  CHECK(run_cli({"d2n", "--disp", data("disp/s0.pfm"), "--rig", out / "none.json", "--out", out / "n.pfm"}).code ==
        cli::kIo);

  write_string(out.path() / "bad_rig.json", "{\"fx\": 1}");
  CHECK(run_cli({"d2n", "--disp", data("disp/s0.pfm"), "--rig", out / "bad_rig.json", "--out", out / "n.pfm"})
            .code == cli::kData);
  write_string(out.path() / "junk.pfm", "Pf\n4 4\n-1\n");
  CHECK(run_cli({"d2n", "--disp", out / "junk.pfm", "--rig", data("rig.json"), "--out", out / "n.pfm"}).code ==
        cli::kData);
  CHECK(run_cli({"eval", "disparity", "--pred", data("pred/s0.pfm"), "--gt", data("normal/s0.pfm")}).code ==
        cli::kData);
}

TEST_CASE("unpaired stems are an error") {
  TempDir out("cli_pair");
  fs::create_directories(out.path() / "gt");
  fs::copy_file(data("disp/s0.pfm"), out.path() / "gt" / "s0.pfm");
  fs::copy_file(data("disp/s1.pfm"), out.path() / "gt" / "other.pfm");
  const auto r = run_cli({"eval", "disparity", "--pred", data("pred"), "--gt", out / "gt"});
  CHECK(r.code == cli::kData);
  CHECK(r.err.find("counterpart") != std::string::npos);
}

TEST_CASE("d2n writes unit normals matching the library") {
  TempDir out("cli_d2n");
  const auto r = run_cli({"d2n", "--disp", data("disp/s0.pfm"), "--rig", data("rig.json"), "--out", out / "n.pfm"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["samples"] == 1);
  const NormalMap got = normals_from_pfm(read_pfm(read_file(out / "n.pfm")));
  const NormalMap want =
      d2n_transform(disparity_from_pfm(read_pfm(read_file(data("disp/s0.pfm")))), fixture_rig());
  CHECK(got.mask() == want.mask());
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (!got.valid_at(i)) continue;
    CHECK(got.values()[i] == want.values()[i]);
    CHECK(std::abs(got.values()[i].cast<double>().norm() - 1.0) < 1e-6);
  }

  REQUIRE(run_cli({"d2n", "--disp", data("disp"), "--rig", data("rig.json"), "--out", out / "batch", "--format",
                   "png"})
              .code == 0);
  for (int i = 0; i < 3; ++i) CHECK(fs::exists(out.path() / "batch" / ("s" + std::to_string(i) + ".png")));
}

TEST_CASE("stats brightness writes a 256x256 histogram") {
  TempDir out("cli_bright");
  const auto r = run_cli({"stats", "brightness", "--left", data("left"), "--right", data("right"), "--disp",
                          data("disp"), "--out", out / "h.json"});
  REQUIRE(r.code == 0);
  const auto h = histogram2d_from_json(json::parse(read_string(out / "h.json")));
  CHECK(h.x_axis.bins() == 256);
  CHECK(h.y_axis.bins() == 256);
  CHECK(h.sample_count == 3);
  const auto summary = json::parse(r.out);
  CHECK(summary["matched_pixels"] == h.total());
  CHECK(summary.contains("overexposure"));

  Histogram2D want = empty_brightness_histogram();
  for (int i = 0; i < 3; ++i) {
    const auto stem = "s" + std::to_string(i);
    merge_into(want, brightness_joint_histogram(read_png_rgb8(read_file(data("left/" + stem + ".png"))),
                                                read_png_rgb8(read_file(data("right/" + stem + ".png"))),
                                                disparity_from_pfm(read_pfm(read_file(data("disp/" + stem + ".pfm"))))));
  }
  CHECK(h.counts == want.counts);
}

TEST_CASE("stats disparity and normal outputs") {
  TempDir out("cli_stats");
  REQUIRE(run_cli({"stats", "disparity", "--disp", data("disp"), "--out", out / "d.json", "--csv", out / "d.csv"})
              .code == 0);
  const auto d = histogram1d_from_json(json::parse(read_string(out / "d.json")));
  CHECK(d.axis.bins() == 500);
  CHECK(d.sample_count == 3);
  CHECK(read_string(out / "d.csv").rfind("lo,hi,count,fraction\n", 0) == 0);

  REQUIRE(run_cli({"stats", "normal", "--normal", data("normal"), "--out", out / "n.json", "--bin-deg", "2"})
              .code == 0);
  const auto n = histogram2d_from_json(json::parse(read_string(out / "n.json")));
  CHECK(n.x_axis.bins() == 180);
  CHECK(n.y_axis.bins() == 45);
  CHECK(n.transform == DisplayTransform::kLog1p);
  CHECK(run_cli({"stats", "normal", "--normal", data("normal"), "--out", out / "n.json", "--bin-deg", "7"}).code ==
        cli::kData);
}

TEST_CASE("eval on identical files gives zero error") {
  const auto r = run_cli({"eval", "normal", "--pred", data("normal/s0.pfm"), "--gt", data("normal/s0.pfm")});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["mean_deg"] == 0.0);
  CHECK(j["median_deg"] == 0.0);
  CHECK(j["frac_11_25"] == 1.0);
  CHECK(j["frac_22_5"] == 1.0);
  CHECK(j["frac_30"] == 1.0);

  const auto e = run_cli({"eval", "disparity", "--pred", data("disp"), "--gt", data("disp")});
  REQUIRE(e.code == 0);
  CHECK(json::parse(e.out)["epe"] == 0.0);
}

TEST_CASE("eval disparity pools pixels over samples") {
  const auto r = run_cli({"eval", "disparity", "--pred", data("pred"), "--gt", data("disp")});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  double sum = 0;
  std::size_t n = 0;
  for (int i = 0; i < 3; ++i) {
    const auto s = "s" + std::to_string(i) + ".pfm";
    const auto p = disparity_from_pfm(read_pfm(read_file(data("pred/" + s))));
    const auto g = disparity_from_pfm(read_pfm(read_file(data("disp/" + s))));
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (p.valid_at(k) && g.valid_at(k)) {
        sum += std::abs(static_cast<double>(p.values()[k]) - g.values()[k]);
        ++n;
      }
    }
  }
  CHECK(j["pixel_count"] == n);
  CHECK(j["epe"].get<double>() == doctest::Approx(sum / n).epsilon(1e-8));
}

TEST_CASE("pcd and synth outputs") {
  TempDir out("cli_pcd");
  auto r = run_cli({"pcd", "--disp", data("disp/s0.pfm"), "--left", data("left/s0.png"), "--rig", data("rig.json"),
                    "--out", out / "c.ply"});
  REQUIRE(r.code == 0);
  const auto pc = import_ply(read_file(out / "c.ply"));
  CHECK(pc.colors.has_value());
  CHECK_FALSE(pc.normals.has_value());
  CHECK(json::parse(r.out)["points"] == pc.size());

  r = run_cli({"synth", "--scene", data("scene.json"), "--rig", data("rig.json"), "--width", "32", "--height", "24",
               "--out", out / "syn"});
  REQUIRE(r.code == 0);
  for (const char* f : {"left.png", "right.png", "disp.pfm", "normal.pfm", "depth.pfm"}) {
    CHECK(fs::exists(out.path() / "syn" / f));
  }
  const auto d = disparity_from_pfm(read_pfm(read_file(out.path() / "syn" / "disp.pfm")));
  CHECK(d.width() == 32);
  CHECK(json::parse(r.out)["valid_pixels"] == d.valid_count());
}

TEST_CASE("loss subcommand matches the library") {
  auto r = run_cli({"loss", "--gt", data("disp/s0.pfm"), "--pred", data("pred/s0.pfm"), "--weights",
                    "1,0,0,0,0,0,0"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  const auto gt = disparity_from_pfm(read_pfm(read_file(data("disp/s0.pfm"))));
  const auto pred = disparity_from_pfm(read_pfm(read_file(data("pred/s0.pfm"))));
  CHECK(j["L_d"].get<double>() == doctest::Approx(scale_loss(pred, gt)).epsilon(1e-8));
  CHECK(j["L"] == j["L_d"]);
  CHECK(j["per_scale"].size() == 7);
}

TEST_CASE("every subcommand is byte-identical at 1, 4 and 16 threads") {
  TempDir runs("cli_det");
  std::vector<std::map<std::string, Bytes>> files;
  std::vector<std::vector<std::string>> stdouts;
  for (const char* t : {"1", "4", "16"}) {
    const fs::path out = runs.path() / t;
    fs::create_directories(out);
    std::vector<std::string> outs;
    for (auto args : all_subcommands(dataset().path(), out)) {
      args.insert(args.begin(), {"--threads", t});
      const auto r = run_cli(args);
      CAPTURE(args[2]);
      REQUIRE(r.code == 0);
      outs.push_back(r.out);
    }
    files.push_back(snapshot(out));
    stdouts.push_back(outs);
  }
  CHECK(files[0].size() > 10);
  CHECK(files[0] == files[1]);
  CHECK(files[0] == files[2]);
  CHECK(stdouts[0] == stdouts[1]);
  CHECK(stdouts[0] == stdouts[2]);
}
