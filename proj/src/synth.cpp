#include "irs/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "irs/parallel.hpp"

namespace irs {

namespace {

constexpr double kMinT = 1e-9;

bool finite(const Vec3d& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

double component(const Vec3d& v, int axis) {
  return axis == 0 ? v.x : (axis == 1 ? v.y : v.z);
}

struct Candidate {
  double t;
  Vec3d normal;
};

std::optional<Candidate> intersect(const Plane& pl, const Vec3d& o, const Vec3d& d) {
  const double denom = pl.normal.dot(d);
  if (denom == 0.0) return std::nullopt;
  const double t = pl.normal.dot(pl.point - o) / denom;
  if (!(t > kMinT)) return std::nullopt;
  return Candidate{t, pl.normal * (1.0 / pl.normal.norm())};
}

std::optional<Candidate> intersect(const Sphere& s, const Vec3d& o, const Vec3d& d) {
  const Vec3d oc = o - s.center;
  const double a = d.dot(d);
  const double half_b = d.dot(oc);
  const double c = oc.dot(oc) - s.radius * s.radius;
  const double disc = half_b * half_b - a * c;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  // Numerically stable pair of roots.
  const double q = half_b >= 0.0 ? -(half_b + root) : -(half_b - root);
  double t0 = q / a;
  double t1 = q != 0.0 ? c / q : t0;
  if (t0 > t1) std::swap(t0, t1);
  const double t = t0 > kMinT ? t0 : t1;
  if (!(t > kMinT)) return std::nullopt;
  const Vec3d hit = o + d * t;
  const Vec3d n = hit - s.center;
  return Candidate{t, n * (1.0 / n.norm())};
}

std::optional<Candidate> intersect(const Box& b, const Vec3d& o, const Vec3d& d) {
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  int near_axis = -1;
  int far_axis = -1;
  for (int axis = 0; axis < 3; ++axis) {
    const double oa = component(o, axis);
    const double da = component(d, axis);
    const double lo = component(b.min, axis);
    const double hi = component(b.max, axis);
    if (da == 0.0) {
      if (oa < lo || oa > hi) return std::nullopt;
      continue;
    }
    double t0 = (lo - oa) / da;
    double t1 = (hi - oa) / da;
    if (t0 > t1) std::swap(t0, t1);
    if (t0 > t_near) {
      t_near = t0;
      near_axis = axis;
    }
    if (t1 < t_far) {
      t_far = t1;
      far_axis = axis;
    }
    if (t_near > t_far) return std::nullopt;
  }
  double t = t_near;
  int axis = near_axis;
  if (!(t > kMinT)) {
    t = t_far;
    axis = far_axis;
  }
  if (!(t > kMinT) || axis < 0) return std::nullopt;
  Vec3d n{};
  if (axis == 0) n.x = 1.0;
  if (axis == 1) n.y = 1.0;
  if (axis == 2) n.z = 1.0;
  return Candidate{t, n};
}

std::array<std::uint8_t, 3> shade(const Primitive& prim, const RayHit& hit, double gain) {
  // Point light at the left camera centre.
  const Vec3d to_light = -hit.point;
  const double dist = to_light.norm();
  const double cosine = dist > 0.0 ? std::max(0.0, hit.normal.dot(to_light) / dist) : 0.0;
  std::array<std::uint8_t, 3> rgb{};
  for (std::size_t c = 0; c < 3; ++c) {
    const double value = std::nearbyint(255.0 * prim.albedo[c] * cosine * gain);
    rgb[c] = static_cast<std::uint8_t>(std::clamp(value, 0.0, 255.0));
  }
  return rgb;
}

Vec3d pixel_ray(const CameraIntrinsics& k, double u, double v) {
  return {(u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0};
}

}  // namespace

void SceneSpec::validate() const {
  if (!(gain >= 0.0) || !std::isfinite(gain)) throw DomainError("scene gain must be >= 0");
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    const auto& p = primitives[i];
    const std::string where = "primitive " + std::to_string(i) + ": ";
    for (double a : p.albedo) {
      if (!(a >= 0.0 && a <= 1.0)) throw DomainError(where + "albedo must lie in [0, 1]");
    }
    if (const auto* pl = std::get_if<Plane>(&p.shape)) {
      if (!finite(pl->point) || !finite(pl->normal) || !(pl->normal.norm() > 0.0)) {
        throw DomainError(where + "plane needs a finite point and non-zero normal");
      }
    } else if (const auto* s = std::get_if<Sphere>(&p.shape)) {
      if (!finite(s->center) || !(s->radius > 0.0) || !std::isfinite(s->radius)) {
        throw DomainError(where + "sphere needs a finite centre and positive radius");
      }
    } else if (const auto* b = std::get_if<Box>(&p.shape)) {
      if (!finite(b->min) || !finite(b->max) || !(b->min.x < b->max.x) ||
          !(b->min.y < b->max.y) || !(b->min.z < b->max.z)) {
        throw DomainError(where + "box needs finite min < max on every axis");
      }
    }
  }
}

std::optional<RayHit> trace(const SceneSpec& scene, const Vec3d& origin, const Vec3d& dir) {
  std::optional<RayHit> best;
  for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
    const auto c = std::visit([&](const auto& s) { return intersect(s, origin, dir); },
                              scene.primitives[i].shape);
    if (!c || (best && !(c->t < best->t))) continue;
    Vec3d n = c->normal;
    if (n.dot(dir) > 0.0) n = -n;
    best = RayHit{c->t, origin + dir * c->t, n, i};
  }
  return best;
}

RenderOutput render_stereo(const SceneSpec& scene, const StereoRig& rig, int width, int height) {
  if (width <= 0 || height <= 0) throw DimensionError("render size must be positive");
  scene.validate();
  rig.validate();
  const auto& k = rig.intrinsics;
  RenderOutput out{RgbImage(width, height), RgbImage(width, height),
                   DisparityMap(width, height), NormalMap(width, height),
                   DepthMap(width, height)};
  const Vec3d right_origin{rig.baseline, 0.0, 0.0};
  const double fb = k.fx * rig.baseline;

#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      const Vec3d dir = pixel_ray(k, u, v);
      if (const auto hit = trace(scene, Vec3d{}, dir)) {
        const double z = hit->point.z;
        const auto rgb = shade(scene.primitives[hit->primitive], *hit, scene.gain);
        std::copy(rgb.begin(), rgb.end(), out.left_rgb.pixel(u, v));
        if (z > 0.0 && std::isfinite(z)) {
          out.gt_depth.set(u, v, static_cast<float>(z));
          out.gt_disparity.set(u, v, static_cast<float>(fb / z));
          out.gt_normal.set(u, v, hit->normal.cast<float>());
        }
      }
      if (const auto hit = trace(scene, right_origin, dir)) {
        const auto rgb = shade(scene.primitives[hit->primitive], *hit, scene.gain);
        std::copy(rgb.begin(), rgb.end(), out.right_rgb.pixel(u, v));
      }
    }
  }
  return out;
}

std::optional<Vec3d> analytic_normal_oracle(const SceneSpec& scene, const StereoRig& rig,
                                            const Pixel& p) {
  const auto hit = trace(scene, Vec3d{}, pixel_ray(rig.intrinsics, p.u, p.v));
  if (!hit) return std::nullopt;
  return hit->normal;
}

}  // namespace irs
