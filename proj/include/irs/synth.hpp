#pragma once

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "irs/camera.hpp"
#include "irs/types.hpp"

namespace irs {

// Analytic scenes in the left camera frame (x right, y down, z forward).

struct Plane {
  Vec3d point;
  Vec3d normal;  // any non-zero length; orientation is fixed per hit
};

struct Sphere {
  Vec3d center;
  double radius = 1.0;
};

struct Box {
  Vec3d min;
  Vec3d max;
};

struct Primitive {
  std::variant<Plane, Sphere, Box> shape;
  std::array<double, 3> albedo{1.0, 1.0, 1.0};  // reflectance per channel, [0, 1]
};

struct SceneSpec {
  std::vector<Primitive> primitives;
  double gain = 1.0;  // > 1 saturates bright surfaces at 255

  void validate() const;
};

struct RayHit {
  double t = 0.0;
  Point3D point;
  Vec3d normal;  // unit, facing the ray origin
  std::size_t primitive = 0;
};

// Nearest hit along origin + t * dir with t > 0.
std::optional<RayHit> trace(const SceneSpec& scene, const Vec3d& origin, const Vec3d& dir);

struct RenderOutput {
  RgbImage left_rgb;
  RgbImage right_rgb;
  DisparityMap gt_disparity;
  NormalMap gt_normal;
  DepthMap gt_depth;
};

// Ray-casts both views of the rig. Shading is Lambertian under a point light
// at the left camera centre, so a surface point has the same colour in both
// views. Ground-truth maps belong to the left view.
RenderOutput render_stereo(const SceneSpec& scene, const StereoRig& rig, int width, int height);

// Closed-form camera-facing normal of the first surface seen through `p` in
// the left view, or nullopt when the ray escapes.
std::optional<Vec3d> analytic_normal_oracle(const SceneSpec& scene, const StereoRig& rig,
                                            const Pixel& p);

}  // namespace irs
