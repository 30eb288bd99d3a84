// Serial reference kernels against their OpenMP versions.
// Range argument: thread count for the parallel variants. Times are wall-clock.

#include <benchmark/benchmark.h>

#include "irs/d2n.hpp"
#include "irs/dataset_stats.hpp"
#include "irs/metrics.hpp"
#include "irs/parallel.hpp"
#include "irs/pointcloud.hpp"
#include "irs/reference.hpp"
#include "irs/synth.hpp"

namespace {

using namespace irs;

struct Scene {
  StereoRig rig;
  RenderOutput r;
};

const Scene& scene() {
  static const Scene s = [] {
    Scene out;
    out.rig.intrinsics = {480.0, 480.0, 319.5, 239.5};
    out.rig.baseline = 0.1;
    SceneSpec spec;
    spec.primitives.push_back({Plane{{0, 0, 6}, {0.1, -0.2, -1}}, {0.8, 0.8, 0.8}});
    spec.primitives.push_back({Sphere{{0.2, 0.1, 3}, 0.8}, {1, 0.9, 0.7}});
    spec.primitives.push_back({Box{{-1.5, 0.5, 2.5}, {-0.5, 1.5, 3.5}}, {0.3, 0.9, 0.5}});
    out.r = render_stereo(spec, out.rig, 640, 480);
    return out;
  }();
  return s;
}

void set_threads(const benchmark::State& st) { set_thread_count(static_cast<int>(st.range(0))); }

void BM_D2N_Reference(benchmark::State& st) {
  const auto& s = scene();
  for (auto _ : st) benchmark::DoNotOptimize(reference::d2n_transform(s.r.gt_disparity, s.rig));
}
void BM_D2N_OpenMP(benchmark::State& st) {
  set_threads(st);
  const auto& s = scene();
  for (auto _ : st) benchmark::DoNotOptimize(d2n_transform(s.r.gt_disparity, s.rig));
}

void BM_DisparityHist_Reference(benchmark::State& st) {
  const auto& s = scene();
  for (auto _ : st) benchmark::DoNotOptimize(reference::disparity_sample_histogram(s.r.gt_disparity));
}
void BM_DisparityHist_OpenMP(benchmark::State& st) {
  set_threads(st);
  const auto& s = scene();
  for (auto _ : st) benchmark::DoNotOptimize(disparity_sample_histogram(s.r.gt_disparity));
}

void BM_NormalHist_Reference(benchmark::State& st) {
  const auto& s = scene();
  for (auto _ : st) benchmark::DoNotOptimize(reference::normal_angle_sample_histogram(s.r.gt_normal));
}
void BM_NormalHist_OpenMP(benchmark::State& st) {
  set_threads(st);
  const auto& s = scene();
  for (auto _ : st) benchmark::DoNotOptimize(normal_angle_sample_histogram(s.r.gt_normal));
}

void BM_BrightnessHist_Reference(benchmark::State& st) {
  const auto& s = scene();
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        reference::brightness_joint_histogram(s.r.left_rgb, s.r.right_rgb, s.r.gt_disparity));
  }
}
void BM_BrightnessHist_OpenMP(benchmark::State& st) {
  set_threads(st);
  const auto& s = scene();
  for (auto _ : st) {
    benchmark::DoNotOptimize(brightness_joint_histogram(s.r.left_rgb, s.r.right_rgb, s.r.gt_disparity));
  }
}

void BM_EPE_Reference(benchmark::State& st) {
  const auto& s = scene();
  for (auto _ : st) benchmark::DoNotOptimize(reference::epe(s.r.gt_disparity, s.r.gt_disparity));
}
void BM_EPE_OpenMP(benchmark::State& st) {
  set_threads(st);
  const auto& s = scene();
  for (auto _ : st) benchmark::DoNotOptimize(epe(s.r.gt_disparity, s.r.gt_disparity));
}

void BM_Reconstruct_Reference(benchmark::State& st) {
  const auto& s = scene();
  for (auto _ : st) {
    benchmark::DoNotOptimize(reference::reconstruct(s.r.gt_disparity, &s.r.left_rgb, &s.r.gt_normal, s.rig));
  }
}
void BM_Reconstruct_OpenMP(benchmark::State& st) {
  set_threads(st);
  const auto& s = scene();
  for (auto _ : st) {
    benchmark::DoNotOptimize(reconstruct(s.r.gt_disparity, &s.r.left_rgb, &s.r.gt_normal, s.rig));
  }
}

#define IRS_PAIR(name)                                                         \
  BENCHMARK(BM_##name##_Reference)->Unit(benchmark::kMillisecond);             \
  BENCHMARK(BM_##name##_OpenMP)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond)

IRS_PAIR(D2N);
IRS_PAIR(DisparityHist);
IRS_PAIR(NormalHist);
IRS_PAIR(BrightnessHist);
IRS_PAIR(EPE);
IRS_PAIR(Reconstruct);

}  // namespace

BENCHMARK_MAIN();
