#include <cmath>
#include <optional>

#include "irs/reference.hpp"

namespace irs::reference {

NormalMap d2n_transform(const DisparityMap& dm, const StereoRig& rig, const D2NConfig& cfg) {
  rig.validate();
  cfg.validate();
  const int w = dm.width();
  const int h = dm.height();
  const auto& k = rig.intrinsics;

  // Back-project every usable pixel once.
  std::vector<std::optional<Point3D>> pts(dm.size());
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const double d = dm.at(u, v);
      if (!dm.valid(u, v) || !std::isfinite(d) || d <= kEpsilonDisparity) continue;
      const double z = k.fx * rig.baseline / d;
      pts[dm.index(u, v)] = Point3D{(u - k.cx) * z / k.fx, (v - k.cy) * z / k.fy, z};
    }
  }
  auto at = [&](int u, int v) -> std::optional<Point3D> {
    if (u < 0 || v < 0 || u >= w || v >= h) return std::nullopt;
    return pts[dm.index(u, v)];
  };

  NormalMap out(w, h);
  const double eps = cfg.slope_epsilon;
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const auto p = at(u, v);
      if (!p) continue;
      std::vector<Point3D> xs, ys;
      if (cfg.use_left && at(u - 1, v)) xs.push_back(*at(u - 1, v));
      if (cfg.use_right && at(u + 1, v)) xs.push_back(*at(u + 1, v));
      if (cfg.use_up && at(u, v - 1)) ys.push_back(*at(u, v - 1));
      if (cfg.use_down && at(u, v + 1)) ys.push_back(*at(u, v + 1));

      double sx = 0.0, sy = 0.0;
      bool ok = false;
      if (cfg.slope == SlopeModel::kAxisRatio) {
        int nx = 0, ny = 0;
        for (const auto& q : xs) {
          const double dx = q.x - p->x;
          if (dx == 0.0 || std::abs(dx) < eps) continue;
          sx += (q.z - p->z) / dx;
          ++nx;
        }
        for (const auto& q : ys) {
          const double dy = q.y - p->y;
          if (dy == 0.0 || std::abs(dy) < eps) continue;
          sy += (q.z - p->z) / dy;
          ++ny;
        }
        ok = nx > 0 && ny > 0;
        if (ok) {
          sx /= nx;
          sy /= ny;
        }
      } else {
        int n = 0;
        for (const auto& qx : xs) {
          const Vec3d a = qx - *p;
          if (a.x == 0.0 || std::abs(a.x) < eps) continue;
          for (const auto& qy : ys) {
            const Vec3d b = qy - *p;
            if (b.y == 0.0 || std::abs(b.y) < eps) continue;
            const double det = a.x * b.y - a.y * b.x;
            if (det == 0.0 || std::abs(det) < eps * eps) continue;
            sx += (a.z * b.y - b.z * a.y) / det;
            sy += (a.x * b.z - b.x * a.z) / det;
            ++n;
          }
        }
        ok = n > 0;
        if (ok) {
          sx /= n;
          sy /= n;
        }
      }
      if (!ok) continue;
      const Vec3d raw{sx + 0.0, sy + 0.0, -1.0};
      const double len = raw.norm();
      if (!std::isfinite(len)) continue;
      out.set(u, v, (raw * (1.0 / len)).cast<float>());
    }
  }
  return out;
}

Histogram1D disparity_sample_histogram(const DisparityMap& dm, int bins) {
  if (dm.width() <= 0) throw DimensionError("disparity map has zero width");
  Histogram1D h(HistogramKind::kDisparity, BinAxis::uniform(0.0, kDisparityRangeHi, bins));
  for (std::size_t i = 0; i < dm.size(); ++i) {
    const double d = dm.values()[i];
    if (dm.valid_at(i) && std::isfinite(d)) h.add(kDisparityScale * d / dm.width());
  }
  h.sample_count = 1;
  return h;
}

Histogram2D normal_angle_sample_histogram(const NormalMap& nm, double bin_deg) {
  Histogram2D acc = empty_normal_angle_histogram(bin_deg);
  Histogram2D tally = acc;
  for (std::size_t i = 0; i < nm.size(); ++i) {
    if (!nm.valid_at(i)) continue;
    const Vec3d n = nm.values()[i].cast<double>();
    const double len = n.norm();
    if (!(len > 0.0) || !std::isfinite(len)) continue;
    const NormalAngles a = normal_to_angles(n * (1.0 / len));
    tally.add(a.alpha_deg, a.beta_deg);
  }
  if (tally.total() > 0) acc.add_sample(tally);
  return acc;
}

Histogram2D brightness_joint_histogram(const RgbImage& left, const RgbImage& right,
                                       const DisparityMap& gt) {
  if (left.width != right.width || left.height != right.height) {
    throw DimensionError("left and right images differ in size");
  }
  require_same_shape(gt, left.width, left.height, "ground-truth disparity");
  Histogram2D acc = empty_brightness_histogram();
  Histogram2D tally = acc;
  const GrayImage gl = rgb_to_gray(left, GrayRounding::kHalfEven);
  const GrayImage gr = rgb_to_gray(right, GrayRounding::kHalfEven);
  for (int v = 0; v < left.height; ++v) {
    for (int u = 0; u < left.width; ++u) {
      if (!gt.valid(u, v) || !std::isfinite(gt.at(u, v))) continue;
      const double ur = std::nearbyint(u - static_cast<double>(gt.at(u, v)));
      if (ur < 0.0 || ur >= left.width) continue;
      const std::size_t li = static_cast<std::size_t>(v) * left.width + u;
      const std::size_t ri = static_cast<std::size_t>(v) * left.width + static_cast<std::size_t>(ur);
      tally.add(gl.values[li], gr.values[ri]);
    }
  }
  acc.add_sample(tally);
  return acc;
}

double epe(const DisparityMap& pred, const DisparityMap& gt) {
  require_same_shape(pred, gt.width(), gt.height(), "predicted disparity");
  long double sum = 0.0L;
  std::size_t n = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const double g = gt.values()[i];
    const double p = pred.values()[i];
    if (!gt.valid_at(i) || !pred.valid_at(i) || !std::isfinite(g) || !std::isfinite(p)) continue;
    sum += std::abs(p - g);
    ++n;
  }
  if (n == 0) throw EmptyInputError("epe: no valid pixels");
  return static_cast<double>(sum / static_cast<long double>(n));
}

PointCloud reconstruct(const DisparityMap& dm, const RgbImage* rgb, const NormalMap* normals,
                       const StereoRig& rig) {
  rig.validate();
  PointCloud pc;
  if (rgb) pc.colors.emplace();
  if (normals) pc.normals.emplace();
  for (int v = 0; v < dm.height(); ++v) {
    for (int u = 0; u < dm.width(); ++u) {
      const double d = dm.at(u, v);
      if (!dm.valid(u, v) || !std::isfinite(d) || d <= kEpsilonDisparity) continue;
      if (normals) {
        if (!normals->valid(u, v)) continue;
        const Vec3d n = normals->at(u, v).cast<double>();
        const double len = n.norm();
        if (!(len > 0.0) || !std::isfinite(len)) continue;
        pc.normals->push_back(n * (1.0 / len));
      }
      const double z = disparity_to_depth(d, rig);
      pc.points.push_back(backproject({double(u), double(v)}, z, rig.intrinsics));
      if (rgb) {
        const auto* p = rgb->pixel(u, v);
        pc.colors->push_back({p[0], p[1], p[2]});
      }
    }
  }
  return pc;
}

}  // namespace irs::reference
