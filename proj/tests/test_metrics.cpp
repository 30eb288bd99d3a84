#include <doctest.h>

#include <algorithm>
#include <random>

#include "irs/json_io.hpp"
#include "irs/metrics.hpp"
#include "support.hpp"

using namespace irs;

namespace {

DisparityMap random_disparity(std::mt19937_64& rng, int w, int h, double invalid_rate = 0.0) {
  std::uniform_real_distribution<float> d(0.5f, 60.0f);
  std::bernoulli_distribution drop(invalid_rate);
  DisparityMap m(w, h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const float x = d(rng);
      if (!drop(rng)) m.set(u, v, x);
    }
  }
  return m;
}

NormalMap random_normals(std::mt19937_64& rng, int w, int h) {
  NormalMap m(w, h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) m.set(u, v, irs::test::random_camera_facing_normal(rng, 85).cast<float>());
  }
  return m;
}

}  // namespace

TEST_CASE("epe examples") {
  const auto gt = irs::test::constant_disparity(8, 6, 10.0f);
  CHECK(epe(gt, gt) == 0.0);
  CHECK(epe(irs::test::constant_disparity(8, 6, 11.0f), gt) == 1.0);

  DisparityMap half = gt;
  for (int v = 0; v < 6; ++v) {
    for (int u = 0; u < 4; ++u) half.at(u, v) = 12.0f;
  }
  CHECK(epe(half, gt) == 1.0);

  CHECK_THROWS_AS(epe(DisparityMap(8, 5, 1.0f, true), gt), DimensionError);
  CHECK_THROWS_AS(epe(gt, DisparityMap(8, 6)), EmptyInputError);
}

TEST_CASE("epe ignores invalid ground truth and is symmetric") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_disparity(rng, 17, 9, 0.2);
    const auto b = random_disparity(rng, 17, 9, 0.2);
    double s = 0;
    int n = 0;
    for (int v = 0; v < 9; ++v) {
      for (int u = 0; u < 17; ++u) {
        if (a.valid(u, v) && b.valid(u, v)) {
          s += std::abs(static_cast<double>(a.at(u, v)) - b.at(u, v));
          ++n;
        }
      }
    }
    CHECK(epe(a, b) == doctest::Approx(s / n).epsilon(1e-12));
    CHECK(epe(a, b) == epe(b, a));
    CHECK(epe(a, a) == 0.0);
  }
}

TEST_CASE("epe error map marks per-pixel residuals") {
  auto pred = irs::test::constant_disparity(3, 2, 4.0f);
  auto gt = irs::test::constant_disparity(3, 2, 1.5f);
  gt.invalidate(1, 1);
  const auto e = epe_error_map(pred, gt);
  CHECK(e.at(0, 0) == 2.5f);
  CHECK_FALSE(e.valid(1, 1));
  CHECK(e.valid_count() == 5);
}

TEST_CASE("smooth_l1 branches and seam") {
  CHECK(smooth_l1(0.0) == 0.0);
  CHECK(smooth_l1(0.5) == 0.125);
  CHECK(smooth_l1(-0.5) == 0.125);
  CHECK(smooth_l1(2.0) == 1.5);
  CHECK(smooth_l1(-2.0) == 1.5);
  CHECK(smooth_l1(1.0) == 0.5);
  CHECK(0.5 * 1.0 * 1.0 == 1.0 - 0.5);
  CHECK(smooth_l1(std::nextafter(1.0, 0.0)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("smooth_l1 is continuous and non-negative") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> x(-5, 5);
  for (int i = 0; i < 10000; ++i) {
    const double a = x(rng);
    CHECK(smooth_l1(a) >= 0.0);
    CHECK(std::abs(smooth_l1(a + 1e-7) - smooth_l1(a)) <= 1.1e-7);
  }
}

TEST_CASE("scale loss examples") {
  const auto gt = irs::test::constant_disparity(4, 2, 3.0f);
  CHECK(scale_loss(gt, gt) == 0.0);
  CHECK(scale_loss(irs::test::constant_disparity(4, 2, 3.5f), gt) == 0.125);
  DisparityMap mixed = gt;
  for (int u = 0; u < 4; ++u) {
    mixed.at(u, 0) = 3.5f;
    mixed.at(u, 1) = 5.0f;
  }
  CHECK(scale_loss(mixed, gt) == 0.8125);
  CHECK_THROWS_AS(scale_loss(gt, DisparityMap(4, 2)), EmptyInputError);
}

TEST_CASE("gt pyramid shapes and halving") {
  const auto p = build_gt_pyramid(irs::test::constant_disparity(64, 64, 32.0f));
  REQUIRE(p.size() == 7);
  for (int s = 0; s < 7; ++s) {
    CHECK(p[static_cast<std::size_t>(s)].width() == 64 >> s);
    CHECK(p[static_cast<std::size_t>(s)].valid(0, 0));
    CHECK(p[static_cast<std::size_t>(s)].at(0, 0) == 32.0f / static_cast<float>(1 << s));
  }
  CHECK(p[6].width() == 1);
  CHECK(p[6].height() == 1);
  CHECK(p[6].at(0, 0) == 0.5f);

  const auto odd = build_gt_pyramid(DisparityMap(13, 5, 1.0f, true));
  const int ws[] = {13, 7, 4, 2, 1, 1, 1};
  const int hs[] = {5, 3, 2, 1, 1, 1, 1};
  for (int s = 0; s < 7; ++s) {
    CHECK(odd[static_cast<std::size_t>(s)].width() == ws[s]);
    CHECK(odd[static_cast<std::size_t>(s)].height() == hs[s]);
  }
}

TEST_CASE("gt pyramid level 1 is the valid 2x2 block mean halved") {
  std::mt19937_64 rng(7);
  const auto gt = random_disparity(rng, 21, 15, 0.3);
  const auto p = build_gt_pyramid(gt);
  const auto& l1 = p[1];
  for (int v = 0; v < l1.height(); ++v) {
    for (int u = 0; u < l1.width(); ++u) {
      double s = 0;
      int n = 0;
      for (int dv = 0; dv < 2; ++dv) {
        for (int du = 0; du < 2; ++du) {
          const int x = 2 * u + du, y = 2 * v + dv;
          if (x < gt.width() && y < gt.height() && gt.valid(x, y)) {
            s += gt.at(x, y);
            ++n;
          }
        }
      }
      CHECK(l1.valid(u, v) == (n > 0));
      if (n > 0) CHECK(l1.at(u, v) == doctest::Approx(s / n / 2.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("masked regions stay masked through the pyramid") {
  DisparityMap gt(32, 32, 8.0f, true);
  for (int v = 0; v < 16; ++v) {
    for (int u = 0; u < 16; ++u) gt.invalidate(u, v);
  }
  const auto p = build_gt_pyramid(gt);
  for (int s = 0; s < 5; ++s) {
    const auto& l = p[static_cast<std::size_t>(s)];
    CHECK_FALSE(l.valid(0, 0));
    CHECK(l.valid(l.width() - 1, l.height() - 1));
  }
}

TEST_CASE("multiscale loss") {
  std::mt19937_64 rng(9);
  const auto gt = random_disparity(rng, 64, 48);
  const auto gt_levels = build_gt_pyramid(gt);

  LossPyramid exact{gt_levels, kDefaultScaleWeights};
  CHECK(multiscale_disparity_loss(exact, gt) == 0.0);

  LossPyramid noisy{gt_levels, kDefaultScaleWeights};
  std::normal_distribution<float> noise(0.0f, 1.5f);
  for (auto& l : noisy.levels) {
    for (auto& x : l.values()) x += noise(rng);
  }

  // Hand-computed weighted sum, brute force per level.
  double oracle = 0;
  std::array<double, 7> per{};
  for (std::size_t s = 0; s < 7; ++s) {
    double acc = 0;
    int n = 0;
    for (std::size_t i = 0; i < gt_levels[s].size(); ++i) {
      const double r = static_cast<double>(gt_levels[s].values()[i]) - noisy.levels[s].values()[i];
      acc += std::abs(r) < 1 ? 0.5 * r * r : std::abs(r) - 0.5;
      ++n;
    }
    per[s] = acc / n;
    oracle += kDefaultScaleWeights[s] * per[s];
  }
  const auto terms = multiscale_disparity_loss_terms(noisy, gt);
  CHECK(terms.total == doctest::Approx(oracle).epsilon(1e-12));
  for (std::size_t s = 0; s < 7; ++s) CHECK(terms.per_scale[s] == doctest::Approx(per[s]).epsilon(1e-12));

  LossPyramid one_hot = noisy;
  one_hot.weights = {1, 0, 0, 0, 0, 0, 0};
  CHECK(multiscale_disparity_loss(one_hot, gt) == scale_loss(noisy.levels[0], gt));

  // Linear in the weights.
  std::uniform_real_distribution<double> w(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    ScaleWeights a{}, b{}, sum{};
    for (std::size_t s = 0; s < 7; ++s) {
      a[s] = w(rng);
      b[s] = w(rng);
      sum[s] = a[s] + b[s];
    }
    LossPyramid pa = noisy, pb = noisy, ps = noisy;
    pa.weights = a;
    pb.weights = b;
    ps.weights = sum;
    CHECK(multiscale_disparity_loss(ps, gt) ==
          doctest::Approx(multiscale_disparity_loss(pa, gt) + multiscale_disparity_loss(pb, gt)).epsilon(1e-12));
  }
}

TEST_CASE("multiscale loss rejects malformed pyramids") {
  const auto gt = irs::test::constant_disparity(16, 16, 4.0f);
  auto levels = build_gt_pyramid(gt);
  LossPyramid short_p{{levels.begin(), levels.begin() + 6}, kDefaultScaleWeights};
  CHECK_THROWS_AS(multiscale_disparity_loss(short_p, gt), DomainError);
  LossPyramid neg{levels, kDefaultScaleWeights};
  neg.weights[3] = -0.1;
  CHECK_THROWS_AS(multiscale_disparity_loss(neg, gt), DomainError);
  LossPyramid bad_shape{levels, kDefaultScaleWeights};
  bad_shape.levels[2] = DisparityMap(5, 4, 1.0f, true);
  CHECK_THROWS_AS(multiscale_disparity_loss(bad_shape, gt), DimensionError);
  LossPyramid other_gt{build_gt_pyramid(irs::test::constant_disparity(18, 16, 4.0f)), kDefaultScaleWeights};
  CHECK_THROWS_AS(multiscale_disparity_loss(other_gt, gt), DimensionError);
}

TEST_CASE("normal loss examples") {
  const NormalMap gt(6, 4, Vec3f{0, 0, -1}, true);
  CHECK(normal_loss(gt, gt) == 0.0);
  CHECK(normal_loss(NormalMap(6, 4, Vec3f{0, 0, 1}, true), gt) == 4.0);
  CHECK(normal_loss(NormalMap(6, 4, Vec3f{1, 0, 0}, true), NormalMap(6, 4, Vec3f{0, 1, 0}, true)) == 2.0);
  CHECK_THROWS_AS(normal_loss(gt, NormalMap(6, 4)), EmptyInputError);
}

TEST_CASE("normal loss matches 2 - 2 cos(theta) per pixel") {
  std::mt19937_64 rng(10);
  const auto a = random_normals(rng, 1, 500);
  const auto b = random_normals(rng, 1, 500);
  for (int v = 0; v < 500; ++v) {
    NormalMap pa(1, 1), pb(1, 1);
    pa.set(0, 0, a.at(0, v));
    pb.set(0, 0, b.at(0, v));
    const double theta = normal_angles_deg(pa, pb).at(0) * M_PI / 180.0;
    CHECK(std::abs(normal_loss(pa, pb) - (2.0 - 2.0 * std::cos(theta))) <= 1e-6);
  }
}

TEST_CASE("normal angle error examples") {
  const NormalMap gt(10, 10, Vec3f{0, 0, -1}, true);
  auto s = normal_angle_errors(gt, gt);
  CHECK(s.mean_deg == 0.0);
  CHECK(s.median_deg == 0.0);
  CHECK(s.frac_11_25 == 1.0);
  CHECK(s.frac_22_5 == 1.0);
  CHECK(s.frac_30 == 1.0);
  CHECK(s.pixel_count == 100);

  const float r = static_cast<float>(std::sqrt(0.5));
  s = normal_angle_errors(NormalMap(10, 10, Vec3f{r, 0, -r}, true), gt);
  CHECK(s.mean_deg == doctest::Approx(45.0).epsilon(1e-6));
  CHECK(s.median_deg == doctest::Approx(45.0).epsilon(1e-6));
  CHECK(s.frac_30 == 0.0);

  CHECK_THROWS_AS(normal_angle_errors(gt, NormalMap(10, 10)), EmptyInputError);
  CHECK_THROWS_AS(normal_angle_errors(gt, NormalMap(10, 9, Vec3f{0, 0, -1}, true)), DimensionError);
}

TEST_CASE("angle stats: thresholds are strict, median is exact") {
  auto s = angle_error_stats({11.25, 22.5, 30.0, 1.0});
  CHECK(s.frac_11_25 == 0.25);
  CHECK(s.frac_22_5 == 0.5);
  CHECK(s.frac_30 == 0.75);
  CHECK(s.median_deg == doctest::Approx((11.25 + 22.5) / 2));
  s = angle_error_stats({5.0, 1.0, 3.0});
  CHECK(s.median_deg == 3.0);
  CHECK(s.mean_deg == 3.0);
}

TEST_CASE("angle stats agree with a sort-based oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> a(0, 60);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs(1 + trial * 7);
    for (auto& x : xs) x = a(rng);
    auto sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    const auto below = [&](double t) {
      return static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin()) /
             static_cast<double>(n);
    };
    const auto s = angle_error_stats(xs);
    CHECK(s.median_deg == median);
    CHECK(s.mean_deg == doctest::Approx(mean).epsilon(1e-12));
    CHECK(s.frac_11_25 == below(11.25));
    CHECK(s.frac_22_5 == below(22.5));
    CHECK(s.frac_30 == below(30.0));
  }
}

TEST_CASE("fraction thresholds are monotone on random normal maps") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = normal_angle_errors(random_normals(rng, 16, 12), random_normals(rng, 16, 12));
    CHECK(0.0 <= s.frac_11_25);
    CHECK(s.frac_11_25 <= s.frac_22_5);
    CHECK(s.frac_22_5 <= s.frac_30);
    CHECK(s.frac_30 <= 1.0);
    CHECK(s.mean_deg >= 0.0);
    CHECK(s.median_deg >= 0.0);
  }
}

TEST_CASE("normal stats json formats reported magnitudes cleanly") {
  NormalErrorStats s;
  s.mean_deg = 10.64;
  s.median_deg = 0.0;
  s.frac_11_25 = 0.741;
  s.frac_22_5 = 0.866;
  s.frac_30 = 0.912;
  s.pixel_count = 1000;
  const auto j = normal_stats_to_json(s);
  CHECK(j["mean_deg"].dump() == "10.64");
  CHECK(j["frac_11_25"].dump() == "0.741");
  CHECK(j["frac_22_5"].dump() == "0.866");
  CHECK(j["frac_30"].dump() == "0.912");
}
