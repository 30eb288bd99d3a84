#include "irs/d2n.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "irs/parallel.hpp"

namespace irs {

void D2NConfig::validate() const {
  if (!(use_left || use_right)) throw DomainError("D2N needs at least one x-neighbour");
  if (!(use_up || use_down)) throw DomainError("D2N needs at least one y-neighbour");
  if (!(slope_epsilon >= 0.0)) throw DomainError("slope_epsilon must be non-negative");
}

namespace {

struct Slopes {
  double sx = 0.0;
  double sy = 0.0;
};

class PointLookup {
 public:
  PointLookup(const DisparityMap& dm, const StereoRig& rig)
      : dm_(dm), k_(rig.intrinsics), fb_(rig.intrinsics.fx * rig.baseline) {}

  std::optional<Point3D> operator()(int u, int v) const {
    if (!dm_.in_bounds(u, v) || !dm_.valid(u, v)) return std::nullopt;
    const double d = dm_.at(u, v);
    if (!std::isfinite(d) || d <= kEpsilonDisparity) return std::nullopt;
    const double z = fb_ / d;
    return Point3D{(u - k_.cx) * z / k_.fx, (v - k_.cy) * z / k_.fy, z};
  }

 private:
  const DisparityMap& dm_;
  CameraIntrinsics k_;
  double fb_;
};

std::optional<Slopes> axis_ratio(const Point3D& p, const std::optional<Point3D>* xs, int nx,
                                 const std::optional<Point3D>* ys, int ny, double eps) {
  double sx = 0.0, sy = 0.0;
  int cx = 0, cy = 0;
  for (int i = 0; i < nx; ++i) {
    if (!xs[i]) continue;
    const double dx = xs[i]->x - p.x;
    if (std::abs(dx) < eps || dx == 0.0) continue;
    sx += (xs[i]->z - p.z) / dx;
    ++cx;
  }
  for (int i = 0; i < ny; ++i) {
    if (!ys[i]) continue;
    const double dy = ys[i]->y - p.y;
    if (std::abs(dy) < eps || dy == 0.0) continue;
    sy += (ys[i]->z - p.z) / dy;
    ++cy;
  }
  if (cx == 0 || cy == 0) return std::nullopt;
  return Slopes{sx / cx, sy / cy};
}

std::optional<Slopes> coupled(const Point3D& p, const std::optional<Point3D>* xs, int nx,
                              const std::optional<Point3D>* ys, int ny, double eps) {
  double sx = 0.0, sy = 0.0;
  int count = 0;
  for (int i = 0; i < nx; ++i) {
    if (!xs[i]) continue;
    const Vec3d a = *xs[i] - p;
    if (std::abs(a.x) < eps || a.x == 0.0) continue;
    for (int j = 0; j < ny; ++j) {
      if (!ys[j]) continue;
      const Vec3d b = *ys[j] - p;
      if (std::abs(b.y) < eps || b.y == 0.0) continue;
      const double det = a.x * b.y - a.y * b.x;
      if (std::abs(det) < eps * eps || det == 0.0) continue;
      sx += (a.z * b.y - b.z * a.y) / det;
      sy += (a.x * b.z - b.x * a.z) / det;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return Slopes{sx / count, sy / count};
}

}  // namespace

NormalMap d2n_transform(const DisparityMap& dm, const StereoRig& rig, const D2NConfig& cfg) {
  rig.validate();
  cfg.validate();
  NormalMap out(dm.width(), dm.height());
  const PointLookup point(dm, rig);
  const int w = dm.width();
  const int h = dm.height();

#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const auto pi = point(u, v);
      if (!pi) continue;
      std::optional<Point3D> xs[2];
      std::optional<Point3D> ys[2];
      int nx = 0, ny = 0;
      if (cfg.use_left) xs[nx++] = point(u - 1, v);
      if (cfg.use_right) xs[nx++] = point(u + 1, v);
      if (cfg.use_up) ys[ny++] = point(u, v - 1);
      if (cfg.use_down) ys[ny++] = point(u, v + 1);

      const auto s = cfg.slope == SlopeModel::kCoupled
                         ? coupled(*pi, xs, nx, ys, ny, cfg.slope_epsilon)
                         : axis_ratio(*pi, xs, nx, ys, ny, cfg.slope_epsilon);
      if (!s) continue;
      // +0.0 folds negative zero from one-sided differences.
      const Vec3d raw{s->sx + 0.0, s->sy + 0.0, -1.0};
      const double len = raw.norm();
      if (!std::isfinite(len)) continue;
      out.set(u, v, (raw * (1.0 / len)).cast<float>());
    }
  }
  return out;
}

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// sin/cos of an angle in degrees, exact at multiples of 90.
void sincos_deg(double deg, double& s, double& c) {
  const double q = deg / 90.0;
  if (q == std::floor(q) && std::abs(q) < 1e9) {
    static constexpr double kSin[4] = {0.0, 1.0, 0.0, -1.0};
    static constexpr double kCos[4] = {1.0, 0.0, -1.0, 0.0};
    const auto k = static_cast<long long>(q);
    const auto i = static_cast<std::size_t>(((k % 4) + 4) % 4);
    s = kSin[i];
    c = kCos[i];
    return;
  }
  s = std::sin(deg * kDeg);
  c = std::cos(deg * kDeg);
}

}  // namespace

NormalAngles normal_to_angles(const Vec3d& n) {
  const double len = n.norm();
  if (!std::isfinite(len) || std::abs(len - 1.0) > 1e-6) {
    throw DomainError("normal is not unit length (|n| = " + std::to_string(len) + ")");
  }
  const double planar = std::hypot(n.x, n.y);
  double alpha = 0.0;
  if (planar > 0.0) {
    alpha = std::atan2(n.y, n.x) / kDeg;
    if (alpha < 0.0) alpha += 360.0;
    if (alpha >= 360.0) alpha = 0.0;
  }
  return {alpha, std::atan2(n.z, planar) / kDeg};
}

Vec3d angles_to_normal(const NormalAngles& a) {
  if (!(a.alpha_deg >= 0.0 && a.alpha_deg < 360.0)) {
    throw DomainError("alpha must lie in [0, 360)");
  }
  if (!(a.beta_deg >= -90.0 && a.beta_deg <= 0.0)) {
    throw DomainError("beta must lie in [-90, 0]");
  }
  double sa, ca, sb, cb;
  sincos_deg(a.alpha_deg, sa, ca);
  sincos_deg(a.beta_deg, sb, cb);
  return {cb * ca, cb * sa, sb};
}

NormalMap normalize_normals(const NormalMap& nm) {
  NormalMap out(nm.width(), nm.height());
  const auto n = static_cast<std::ptrdiff_t>(nm.size());
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (!nm.valid_at(idx)) continue;
    const Vec3d raw = nm.values()[idx].cast<double>();
    const double len = raw.norm();
    if (!(len > 0.0) || !std::isfinite(len)) continue;
    out.values()[idx] = (raw * (1.0 / len)).cast<float>();
    out.set_valid(idx, true);
  }
  return out;
}

}  // namespace irs
