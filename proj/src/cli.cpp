#include "irs/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "irs/d2n.hpp"
#include "irs/dataset_stats.hpp"
#include "irs/io.hpp"
#include "irs/json_io.hpp"
#include "irs/metrics.hpp"
#include "irs/parallel.hpp"
#include "irs/pointcloud.hpp"
#include "irs/synth.hpp"

namespace irs::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Raised for flag combinations CLI11 cannot express.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_text(const fs::path& p) {
  const Bytes b = read_file(p);
  return std::string(b.begin(), b.end());
}

void write_text(const fs::path& p, const std::string& s) {
  write_file(p, std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

StereoRig load_rig(const fs::path& p) { return parse_rig(read_text(p)); }

DisparityMap load_disparity(const fs::path& p) { return disparity_from_pfm(read_pfm(read_file(p))); }
NormalMap load_normals(const fs::path& p) {
  if (p.extension() == ".png") return read_png_normals16(read_file(p));
  return normals_from_pfm(read_pfm(read_file(p)));
}
RgbImage load_rgb(const fs::path& p) { return read_png_rgb8(read_file(p)); }

// A single file, or every file with `ext` in a directory, sorted by name.
std::vector<fs::path> list_inputs(const fs::path& p, const std::string& ext) {
  std::error_code ec;
  if (fs::is_regular_file(p, ec)) return {p};
  if (!fs::is_directory(p, ec)) throw IoError("input not found: " + p.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(p)) {
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw IoError("no *" + ext + " files in " + p.string());
  return out;
}

std::map<std::string, fs::path> by_stem(const std::vector<fs::path>& files) {
  std::map<std::string, fs::path> out;
  for (const auto& f : files) out[f.stem().string()] = f;
  return out;
}

// Pairs inputs by filename stem; any stem missing from one side is an error.
std::vector<std::vector<fs::path>> pair_by_stem(const std::vector<std::vector<fs::path>>& sets,
                                                const std::vector<std::string>& names) {
  if (std::all_of(sets.begin(), sets.end(), [](const auto& s) { return s.size() == 1; })) {
    std::vector<fs::path> one;
    for (const auto& s : sets) one.push_back(s.front());
    return {one};
  }
  std::vector<std::map<std::string, fs::path>> maps;
  for (const auto& s : sets) maps.push_back(by_stem(s));
  for (std::size_t i = 1; i < maps.size(); ++i) {
    for (const auto& [stem, path] : maps[0]) {
      if (!maps[i].count(stem)) {
        throw DomainError("sample '" + stem + "' has no " + names[i] + " counterpart");
      }
    }
    for (const auto& [stem, path] : maps[i]) {
      if (!maps[0].count(stem)) {
        throw DomainError("sample '" + stem + "' has no " + names[0] + " counterpart");
      }
    }
  }
  std::vector<std::vector<fs::path>> out;
  for (const auto& [stem, path] : maps[0]) {
    std::vector<fs::path> row;
    for (const auto& m : maps) row.push_back(m.at(stem));
    out.push_back(std::move(row));
  }
  return out;
}

// Runs fn(i) for every sample with dynamic scheduling; the first failure in
// sample order is rethrown.
template <typename Fn>
void for_each_sample(std::size_t n, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

SlopeModel parse_slope(const std::string& s) {
  return s == "axis" ? SlopeModel::kAxisRatio : SlopeModel::kCoupled;
}

// ---- subcommands ----------------------------------------------------------

struct D2NArgs {
  std::string disp, rig, out, slope = "coupled", format = "pfm";
};

void run_d2n(const D2NArgs& a) {
  const StereoRig rig = load_rig(a.rig);
  D2NConfig cfg;
  cfg.slope = parse_slope(a.slope);
  const auto inputs = list_inputs(a.disp, ".pfm");
  const bool batch = fs::is_directory(a.disp);
  if (batch) fs::create_directories(a.out);
  const std::string ext = a.format == "png" ? ".png" : ".pfm";

  std::vector<std::size_t> valid(inputs.size(), 0);
  for_each_sample(inputs.size(), [&](std::size_t i) {
    const NormalMap nm = d2n_transform(load_disparity(inputs[i]), rig, cfg);
    valid[i] = nm.valid_count();
    const fs::path out = batch ? fs::path(a.out) / (inputs[i].stem().string() + ext) : fs::path(a.out);
    const Bytes bytes = a.format == "png" ? write_png_normals16(nm) : write_pfm(to_pfm(nm));
    write_file(out, bytes);
  });
  std::size_t total = 0;
  for (auto v : valid) total += v;
  std::cerr << "d2n: " << inputs.size() << " map(s), " << total << " valid normals\n";
  emit({{"samples", inputs.size()}, {"valid_normals", total}});
}

struct StatsArgs {
  std::string normal, disp, left, right, out, csv;
  double bin_deg = kDefaultNormalBinDeg;
  int bins = kDefaultDisparityBins;
};

void write_hist_outputs(const StatsArgs& a, const json& j, const std::string& csv) {
  write_text(a.out, j.dump() + "\n");
  if (!a.csv.empty()) write_text(a.csv, csv);
}

void run_stats_normal(const StatsArgs& a) {
  const auto inputs = list_inputs(a.normal, ".pfm");
  const Histogram2D empty = empty_normal_angle_histogram(a.bin_deg);
  std::vector<Histogram2D> parts(inputs.size());
  for_each_sample(inputs.size(), [&](std::size_t i) {
    parts[i] = normal_angle_sample_histogram(load_normals(inputs[i]), a.bin_deg);
  });
  Histogram2D acc = empty;
  for (const auto& p : parts) merge_into(acc, p);
  if (acc.sample_count == 0) throw EmptyInputError("no valid normals in input");
  write_hist_outputs(a, histogram_to_json(acc), histogram_to_csv(acc));
  std::cerr << "stats normal: " << acc.sample_count << " sample(s), " << acc.total() << " normals\n";
  emit({{"kind", "normal_angle"}, {"sample_count", acc.sample_count}, {"total", acc.total()}});
}

void run_stats_disparity(const StatsArgs& a) {
  const auto inputs = list_inputs(a.disp, ".pfm");
  std::vector<Histogram1D> parts(inputs.size());
  for_each_sample(inputs.size(), [&](std::size_t i) {
    parts[i] = disparity_sample_histogram(load_disparity(inputs[i]), a.bins);
  });
  Histogram1D acc(HistogramKind::kDisparity, BinAxis::uniform(0.0, kDisparityRangeHi, a.bins));
  for (const auto& p : parts) merge_into(acc, p);
  if (acc.total() == 0) throw EmptyInputError("no valid disparities in input");
  write_hist_outputs(a, histogram_to_json(acc), histogram_to_csv(acc));
  std::cerr << "stats disparity: " << acc.sample_count << " map(s), " << acc.total() << " pixels\n";
  emit({{"kind", "disparity"},
        {"sample_count", acc.sample_count},
        {"total", acc.total()},
        {"overflow_fraction", round_sig9(acc.overflow_fraction())}});
}

void run_stats_brightness(const StatsArgs& a) {
  const auto pairs = pair_by_stem(
      {list_inputs(a.left, ".png"), list_inputs(a.right, ".png"), list_inputs(a.disp, ".pfm")},
      {"left", "right", "disparity"});
  std::vector<Histogram2D> parts(pairs.size());
  for_each_sample(pairs.size(), [&](std::size_t i) {
    const RgbImage l = load_rgb(pairs[i][0]);
    const RgbImage r = load_rgb(pairs[i][1]);
    const DisparityMap d = load_disparity(pairs[i][2]);
    parts[i] = brightness_joint_histogram(l, r, d);
  });
  Histogram2D acc = empty_brightness_histogram();
  for (const auto& p : parts) merge_into(acc, p);
  write_hist_outputs(a, histogram_to_json(acc), histogram_to_csv(acc));
  json summary = {{"kind", "brightness_joint"},
                  {"sample_count", acc.sample_count},
                  {"matched_pixels", acc.total()}};
  if (acc.total() > 0) {
    const auto ox = overexposure_stats(acc);
    summary["overexposure"] = {{"fraction_both_255", round_sig9(ox.fraction_both_255)},
                               {"fraction_either_255", round_sig9(ox.fraction_either_255)}};
  }
  std::cerr << "stats brightness: " << acc.sample_count << " pair(s), " << acc.total()
            << " matched pixels\n";
  emit(summary);
}

struct EvalArgs {
  std::string pred, gt, error_map, out;
};

void maybe_write_json(const std::string& path, const json& j) {
  if (!path.empty()) write_text(path, j.dump(2) + "\n");
}

void run_eval_disparity(const EvalArgs& a) {
  const auto pairs = pair_by_stem({list_inputs(a.pred, ".pfm"), list_inputs(a.gt, ".pfm")},
                                  {"prediction", "ground truth"});
  if (!a.error_map.empty() && pairs.size() > 1) fs::create_directories(a.error_map);
  std::vector<double> sums(pairs.size(), 0.0);
  std::vector<std::size_t> counts(pairs.size(), 0);
  for_each_sample(pairs.size(), [&](std::size_t i) {
    const DisparityMap pred = load_disparity(pairs[i][0]);
    const DisparityMap gt = load_disparity(pairs[i][1]);
    const ErrorMap err = epe_error_map(pred, gt);
    counts[i] = err.valid_count();
    if (counts[i] > 0) sums[i] = epe(pred, gt) * static_cast<double>(counts[i]);
    if (!a.error_map.empty()) {
      const fs::path out = pairs.size() > 1
                               ? fs::path(a.error_map) / (pairs[i][0].stem().string() + ".pfm")
                               : fs::path(a.error_map);
      write_file(out, write_pfm(to_pfm(err)));
    }
  });
  CompensatedSum total;
  std::size_t n = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    total.add(sums[i]);
    n += counts[i];
  }
  if (n == 0) throw EmptyInputError("epe: no valid pixels");
  const json j = {{"epe", round_sig9(total.value() / static_cast<double>(n))},
                  {"pixel_count", n},
                  {"samples", pairs.size()}};
  std::cerr << "eval disparity: EPE " << j["epe"].get<double>() << " px over " << n << " pixels\n";
  maybe_write_json(a.out, j);
  emit(j);
}

void run_eval_normal(const EvalArgs& a) {
  const auto pairs = pair_by_stem({list_inputs(a.pred, ".pfm"), list_inputs(a.gt, ".pfm")},
                                  {"prediction", "ground truth"});
  if (!a.error_map.empty() && pairs.size() > 1) fs::create_directories(a.error_map);
  std::vector<std::vector<double>> angles(pairs.size());
  for_each_sample(pairs.size(), [&](std::size_t i) {
    const NormalMap pred = load_normals(pairs[i][0]);
    const NormalMap gt = load_normals(pairs[i][1]);
    angles[i] = normal_angles_deg(pred, gt);
    if (!a.error_map.empty()) {
      const fs::path out = pairs.size() > 1
                               ? fs::path(a.error_map) / (pairs[i][0].stem().string() + ".pfm")
                               : fs::path(a.error_map);
      write_file(out, write_pfm(to_pfm(normal_angle_error_map(pred, gt))));
    }
  });
  std::vector<double> all;
  for (const auto& v : angles) all.insert(all.end(), v.begin(), v.end());
  const NormalErrorStats st = angle_error_stats(std::move(all));
  json j = normal_stats_to_json(st);
  j["samples"] = pairs.size();
  std::cerr << "eval normal: mean " << j["mean_deg"].get<double>() << " deg, median "
            << j["median_deg"].get<double>() << " deg\n";
  maybe_write_json(a.out, j);
  emit(j);
}

struct PcdArgs {
  std::string disp, left, normal, rig, out, format = "binary";
};

void run_pcd(const PcdArgs& a) {
  const StereoRig rig = load_rig(a.rig);
  const DisparityMap dm = load_disparity(a.disp);
  std::optional<RgbImage> rgb;
  std::optional<NormalMap> nm;
  if (!a.left.empty()) rgb = load_rgb(a.left);
  if (!a.normal.empty()) nm = load_normals(a.normal);
  const PointCloud pc = reconstruct(dm, rgb ? &*rgb : nullptr, nm ? &*nm : nullptr, rig);
  write_file(a.out, export_ply(pc, a.format == "ascii" ? PlyFormat::kAscii
                                                       : PlyFormat::kBinaryLittleEndian));
  std::cerr << "pcd: " << pc.size() << " points\n";
  emit({{"points", pc.size()}, {"colors", rgb.has_value()}, {"normals", nm.has_value()}});
}

struct SynthArgs {
  std::string scene, rig, out;
  int width = 0, height = 0;
  bool normal_png = false;
};

void run_synth(const SynthArgs& a) {
  const SceneSpec scene = parse_scene(read_text(a.scene));
  const StereoRig rig = load_rig(a.rig);
  const RenderOutput r = render_stereo(scene, rig, a.width, a.height);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_file(dir / "left.png", write_png_rgb8(r.left_rgb));
  write_file(dir / "right.png", write_png_rgb8(r.right_rgb));
  write_file(dir / "disp.pfm", write_pfm(to_pfm(r.gt_disparity)));
  write_file(dir / "normal.pfm", write_pfm(to_pfm(r.gt_normal)));
  write_file(dir / "depth.pfm", write_pfm(to_pfm(r.gt_depth)));
  if (a.normal_png) write_file(dir / "normal.png", write_png_normals16(r.gt_normal));
  std::cerr << "synth: " << a.width << "x" << a.height << ", " << r.gt_disparity.valid_count()
            << " valid pixels\n";
  emit({{"width", a.width}, {"height", a.height}, {"valid_pixels", r.gt_disparity.valid_count()}});
}

struct LossArgs {
  std::string gt, pred_normal, gt_normal, weights;
  std::vector<std::string> pred;
};

ScaleWeights parse_weights(const std::string& s) {
  ScaleWeights w = kDefaultScaleWeights;
  if (s.empty()) return w;
  std::stringstream ss(s);
  std::string item;
  std::size_t i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= w.size()) throw UsageError("--weights takes exactly 7 values");
    try {
      w[i++] = std::stod(item);
    } catch (const std::exception&) {
      throw UsageError("--weights: bad number '" + item + "'");
    }
  }
  if (i != w.size()) throw UsageError("--weights takes exactly 7 values");
  return w;
}

void run_loss(const LossArgs& a) {
  const ScaleWeights weights = parse_weights(a.weights);
  if (a.pred.size() != 1 && a.pred.size() != static_cast<std::size_t>(kPyramidLevels)) {
    throw UsageError("--pred takes 1 full-resolution map or 7 pyramid levels");
  }
  if (a.pred_normal.empty() != a.gt_normal.empty()) {
    throw UsageError("--pred-normal and --gt-normal go together");
  }
  const DisparityMap gt = load_disparity(a.gt);
  LossPyramid pyr;
  pyr.weights = weights;
  if (a.pred.size() == 1) {
    pyr.levels = build_gt_pyramid(load_disparity(a.pred.front()));
  } else {
    for (const auto& p : a.pred) pyr.levels.push_back(load_disparity(p));
  }
  const MultiscaleLoss ld = multiscale_disparity_loss_terms(pyr, gt);
  json per_scale = json::array();
  for (double v : ld.per_scale) per_scale.push_back(round_sig9(v));
  json j = {{"L_d", round_sig9(ld.total)}, {"per_scale", per_scale}, {"weights", weights}};
  double total = ld.total;
  if (!a.pred_normal.empty()) {
    const double ln = normal_loss(load_normals(a.pred_normal), load_normals(a.gt_normal));
    j["L_n"] = round_sig9(ln);
    total += ln;
  }
  j["L"] = round_sig9(total);
  std::cerr << "loss: L = " << j["L"].get<double>() << "\n";
  emit(j);
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Stereo disparity / surface-normal toolkit", "irs"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (default: $IRS_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  D2NArgs d2n;
  auto* d2n_cmd = app.add_subcommand("d2n", "Disparity map(s) to unit surface normals");
  d2n_cmd->add_option("--disp", d2n.disp, "Disparity PFM file or directory")->required();
  d2n_cmd->add_option("--rig", d2n.rig, "Rig JSON")->required();
  d2n_cmd->add_option("--out", d2n.out, "Output file (or directory for batch input)")->required();
  d2n_cmd->add_option("--slope", d2n.slope, "Slope model")
      ->check(CLI::IsMember({"coupled", "axis"}));
  d2n_cmd->add_option("--format", d2n.format, "Output encoding")->check(CLI::IsMember({"pfm", "png"}));

  StatsArgs st;
  auto* stats_cmd = app.add_subcommand("stats", "Dataset distribution histograms");
  stats_cmd->require_subcommand(1);
  auto* st_normal = stats_cmd->add_subcommand("normal", "Normal (alpha, beta) histogram");
  st_normal->add_option("--normal", st.normal, "Normal PFM file or directory")->required();
  st_normal->add_option("--bin-deg", st.bin_deg, "Bin size in degrees")->check(CLI::PositiveNumber);
  auto* st_disp = stats_cmd->add_subcommand("disparity", "Width-normalized disparity histogram");
  st_disp->add_option("--disp", st.disp, "Disparity PFM file or directory")->required();
  st_disp->add_option("--bins", st.bins, "Bins over [0, 50]")->check(CLI::PositiveNumber);
  auto* st_bright = stats_cmd->add_subcommand("brightness", "Left/right brightness joint histogram");
  st_bright->add_option("--left", st.left, "Left PNG file or directory")->required();
  st_bright->add_option("--right", st.right, "Right PNG file or directory")->required();
  st_bright->add_option("--disp", st.disp, "Ground-truth disparity PFM file or directory")->required();
  for (auto* c : {st_normal, st_disp, st_bright}) {
    c->add_option("--out", st.out, "Histogram JSON output")->required();
    c->add_option("--csv", st.csv, "Optional CSV output");
  }

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluation metrics");
  eval_cmd->require_subcommand(1);
  auto* ev_disp = eval_cmd->add_subcommand("disparity", "End-point error");
  auto* ev_norm = eval_cmd->add_subcommand("normal", "Normal angle error statistics");
  for (auto* c : {ev_disp, ev_norm}) {
    c->add_option("--pred", ev.pred, "Prediction file or directory")->required();
    c->add_option("--gt", ev.gt, "Ground-truth file or directory")->required();
    c->add_option("--error-map", ev.error_map, "Per-pixel error PFM (file or directory)");
    c->add_option("--out", ev.out, "Also write the JSON result here");
  }

  PcdArgs pcd;
  auto* pcd_cmd = app.add_subcommand("pcd", "Disparity to PLY point cloud");
  pcd_cmd->add_option("--disp", pcd.disp, "Disparity PFM")->required();
  pcd_cmd->add_option("--left", pcd.left, "Left PNG for colours");
  pcd_cmd->add_option("--normal", pcd.normal, "Normal PFM for per-point normals");
  pcd_cmd->add_option("--rig", pcd.rig, "Rig JSON")->required();
  pcd_cmd->add_option("--out", pcd.out, "Output PLY")->required();
  pcd_cmd->add_option("--format", pcd.format, "PLY encoding")->check(CLI::IsMember({"ascii", "binary"}));

  SynthArgs sy;
  auto* synth_cmd = app.add_subcommand("synth", "Render an analytic scene with ground truth");
  synth_cmd->add_option("--scene", sy.scene, "Scene JSON")->required();
  synth_cmd->add_option("--rig", sy.rig, "Rig JSON")->required();
  synth_cmd->add_option("--width", sy.width, "Image width")->required()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--height", sy.height, "Image height")->required()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--out", sy.out, "Output directory")->required();
  synth_cmd->add_flag("--normal-png", sy.normal_png, "Also write normal.png (16-bit)");

  LossArgs ls;
  auto* loss_cmd = app.add_subcommand("loss", "Multi-scale disparity loss and normal loss");
  loss_cmd->add_option("--gt", ls.gt, "Ground-truth disparity PFM")->required();
  loss_cmd->add_option("--pred", ls.pred, "Predicted disparity PFM(s): 1 or 7 levels")->required();
  loss_cmd->add_option("--weights", ls.weights, "Seven comma-separated scale weights");
  loss_cmd->add_option("--pred-normal", ls.pred_normal, "Predicted normal PFM");
  loss_cmd->add_option("--gt-normal", ls.gt_normal, "Ground-truth normal PFM");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (threads > 0) set_thread_count(threads);

  try {
    if (d2n_cmd->parsed()) run_d2n(d2n);
    if (st_normal->parsed()) run_stats_normal(st);
    if (st_disp->parsed()) run_stats_disparity(st);
    if (st_bright->parsed()) run_stats_brightness(st);
    if (ev_disp->parsed()) run_eval_disparity(ev);
    if (ev_norm->parsed()) run_eval_normal(ev);
    if (pcd_cmd->parsed()) run_pcd(pcd);
    if (synth_cmd->parsed()) run_synth(sy);
    if (loss_cmd->parsed()) run_loss(ls);
  } catch (const UsageError& e) {
    std::cerr << "irs: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "irs: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "irs: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "irs: " << e.what() << "\n";
    return kData;
  }
  return kOk;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace irs::cli
