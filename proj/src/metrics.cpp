#include "irs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "irs/parallel.hpp"

namespace irs {

namespace {

// Deterministic masked mean: one compensated partial per row, rows folded in order.
template <typename Term>
double masked_mean(int width, int height, Term term, const char* what) {
  std::vector<CompensatedSum> rows(static_cast<std::size_t>(height));
  std::vector<std::size_t> counts(static_cast<std::size_t>(height), 0);
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (int v = 0; v < height; ++v) {
    CompensatedSum s;
    std::size_t n = 0;
    for (int u = 0; u < width; ++u) {
      double t;
      if (term(u, v, t)) {
        s.add(t);
        ++n;
      }
    }
    rows[static_cast<std::size_t>(v)] = s;
    counts[static_cast<std::size_t>(v)] = n;
  }
  CompensatedSum total;
  std::size_t n = 0;
  for (int v = 0; v < height; ++v) {
    total.add(rows[static_cast<std::size_t>(v)]);
    n += counts[static_cast<std::size_t>(v)];
  }
  if (n == 0) throw EmptyInputError(std::string(what) + ": no valid pixels");
  return total.value() / static_cast<double>(n);
}

template <typename A, typename B>
void require_match(const A& a, const B& b, const char* what) {
  require_same_shape(a, b.width(), b.height(), what);
}

bool usable(const DisparityMap& m, int u, int v) {
  return m.valid(u, v) && std::isfinite(m.at(u, v));
}

// atan2(|a x b|, a . b) equals acos(clamp(a . b)) for unit vectors but stays
// exact at 0 and 180 degrees for float-rounded inputs.
double angle_deg(const Vec3f& a, const Vec3f& b) {
  const Vec3d da = a.cast<double>();
  const Vec3d db = b.cast<double>();
  const double c = std::clamp(da.dot(db), -1.0, 1.0);
  return std::atan2(cross(da, db).norm(), c) * 180.0 / std::numbers::pi;
}

}  // namespace

double epe(const DisparityMap& pred, const DisparityMap& gt) {
  require_match(pred, gt, "predicted disparity");
  return masked_mean(
      gt.width(), gt.height(),
      [&](int u, int v, double& t) {
        if (!usable(gt, u, v) || !usable(pred, u, v)) return false;
        t = std::abs(static_cast<double>(pred.at(u, v)) - gt.at(u, v));
        return true;
      },
      "epe");
}

ErrorMap epe_error_map(const DisparityMap& pred, const DisparityMap& gt) {
  require_match(pred, gt, "predicted disparity");
  ErrorMap out(gt.width(), gt.height());
  for (int v = 0; v < gt.height(); ++v) {
    for (int u = 0; u < gt.width(); ++u) {
      if (usable(gt, u, v) && usable(pred, u, v)) {
        out.set(u, v, static_cast<float>(std::abs(static_cast<double>(pred.at(u, v)) - gt.at(u, v))));
      }
    }
  }
  return out;
}

double scale_loss(const DisparityMap& pred, const DisparityMap& gt) {
  require_match(pred, gt, "predicted disparity");
  return masked_mean(
      gt.width(), gt.height(),
      [&](int u, int v, double& t) {
        if (!usable(gt, u, v) || !usable(pred, u, v)) return false;
        t = smooth_l1(static_cast<double>(gt.at(u, v)) - pred.at(u, v));
        return true;
      },
      "scale loss");
}

std::vector<DisparityMap> build_gt_pyramid(const DisparityMap& gt) {
  std::vector<DisparityMap> levels;
  levels.reserve(kPyramidLevels);
  levels.push_back(gt);
  for (int s = 1; s < kPyramidLevels; ++s) {
    const DisparityMap& src = levels.back();
    const int w = (src.width() + 1) / 2;
    const int h = (src.height() + 1) / 2;
    DisparityMap dst(w, h);
    for (int v = 0; v < h; ++v) {
      for (int u = 0; u < w; ++u) {
        double sum = 0.0;
        int n = 0;
        for (int dv = 0; dv < 2; ++dv) {
          for (int du = 0; du < 2; ++du) {
            const int su = 2 * u + du;
            const int sv = 2 * v + dv;
            if (src.in_bounds(su, sv) && usable(src, su, sv)) {
              sum += src.at(su, sv);
              ++n;
            }
          }
        }
        if (n > 0) dst.set(u, v, static_cast<float>(sum / n * 0.5));
      }
    }
    levels.push_back(std::move(dst));
  }
  return levels;
}

void LossPyramid::validate() const {
  if (levels.size() != kPyramidLevels) {
    throw DomainError("loss pyramid needs exactly " + std::to_string(kPyramidLevels) +
                      " levels, got " + std::to_string(levels.size()));
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("scale weights must be >= 0");
  }
  for (std::size_t s = 1; s < levels.size(); ++s) {
    const auto& prev = levels[s - 1];
    require_same_shape(levels[s], (prev.width() + 1) / 2, (prev.height() + 1) / 2,
                       ("pyramid level " + std::to_string(s)).c_str());
  }
}

MultiscaleLoss multiscale_disparity_loss_terms(const LossPyramid& p, const DisparityMap& gt) {
  p.validate();
  const auto gt_levels = build_gt_pyramid(gt);
  MultiscaleLoss out;
  CompensatedSum total;
  for (int s = 0; s < kPyramidLevels; ++s) {
    const auto i = static_cast<std::size_t>(s);
    require_same_shape(p.levels[i], gt_levels[i].width(), gt_levels[i].height(),
                       ("pyramid level " + std::to_string(s)).c_str());
    out.per_scale[i] = scale_loss(p.levels[i], gt_levels[i]);
    total.add(p.weights[i] * out.per_scale[i]);
  }
  out.total = total.value();
  return out;
}

double multiscale_disparity_loss(const LossPyramid& p, const DisparityMap& gt) {
  return multiscale_disparity_loss_terms(p, gt).total;
}

double normal_loss(const NormalMap& pred, const NormalMap& gt) {
  require_match(pred, gt, "predicted normals");
  return masked_mean(
      gt.width(), gt.height(),
      [&](int u, int v, double& t) {
        if (!gt.valid(u, v) || !pred.valid(u, v)) return false;
        const Vec3d d = pred.at(u, v).cast<double>() - gt.at(u, v).cast<double>();
        t = d.dot(d);
        return std::isfinite(t);
      },
      "normal loss");
}

ErrorMap normal_angle_error_map(const NormalMap& pred, const NormalMap& gt) {
  require_match(pred, gt, "predicted normals");
  ErrorMap out(gt.width(), gt.height());
  const int h = gt.height();
  const int w = gt.width();
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (!gt.valid(u, v) || !pred.valid(u, v)) continue;
      const double a = angle_deg(pred.at(u, v), gt.at(u, v));
      if (std::isfinite(a)) out.set(u, v, static_cast<float>(a));
    }
  }
  return out;
}

NormalErrorStats angle_error_stats(std::vector<double> angles) {
  if (angles.empty()) throw EmptyInputError("normal angle errors: no valid pixels");
  NormalErrorStats st;
  st.pixel_count = angles.size();
  CompensatedSum sum;
  std::size_t below[3] = {0, 0, 0};
  for (double a : angles) {
    sum.add(a);
    below[0] += a < 11.25;
    below[1] += a < 22.5;
    below[2] += a < 30.0;
  }
  const auto n = static_cast<double>(angles.size());
  st.mean_deg = sum.value() / n;
  st.frac_11_25 = static_cast<double>(below[0]) / n;
  st.frac_22_5 = static_cast<double>(below[1]) / n;
  st.frac_30 = static_cast<double>(below[2]) / n;

  const std::size_t mid = angles.size() / 2;
  std::nth_element(angles.begin(), angles.begin() + static_cast<std::ptrdiff_t>(mid), angles.end());
  const double upper = angles[mid];
  if (angles.size() % 2 == 1) {
    st.median_deg = upper;
  } else {
    const double lower =
        *std::max_element(angles.begin(), angles.begin() + static_cast<std::ptrdiff_t>(mid));
    st.median_deg = 0.5 * (lower + upper);
  }
  return st;
}

std::vector<double> normal_angles_deg(const NormalMap& pred, const NormalMap& gt) {
  require_match(pred, gt, "predicted normals");
  const int h = gt.height();
  const int w = gt.width();
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(h));
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (int v = 0; v < h; ++v) {
    auto& row = rows[static_cast<std::size_t>(v)];
    for (int u = 0; u < w; ++u) {
      if (!gt.valid(u, v) || !pred.valid(u, v)) continue;
      const double a = angle_deg(pred.at(u, v), gt.at(u, v));
      if (std::isfinite(a)) row.push_back(a);
    }
  }
  std::vector<double> angles;
  for (auto& row : rows) angles.insert(angles.end(), row.begin(), row.end());
  return angles;
}

NormalErrorStats normal_angle_errors(const NormalMap& pred, const NormalMap& gt) {
  return angle_error_stats(normal_angles_deg(pred, gt));
}

}  // namespace irs
