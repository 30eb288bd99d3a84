#pragma once

#include "irs/camera.hpp"
#include "irs/types.hpp"

namespace irs {

// How tangent-plane slopes are estimated from neighbouring 3D points.
enum class SlopeModel {
  // Solve dz = s_x*dx + s_y*dy jointly from one x-neighbour chord and one
  // y-neighbour chord, for every such pair. Exact for planes anywhere in the
  // image; identical to kAxisRatio when a chord keeps the other coordinate.
  kCoupled,
  // s_x = dz/dx over x-neighbours and s_y = dz/dy over y-neighbours,
  // independently. Biased off the principal row/column when the surface is
  // tilted about both axes.
  kAxisRatio,
};

struct D2NConfig {
  bool use_left = true;
  bool use_right = true;
  bool use_up = true;
  bool use_down = true;
  // Neighbour estimates whose coordinate difference is smaller than this
  // (meters) are dropped.
  double slope_epsilon = 1e-9;
  SlopeModel slope = SlopeModel::kCoupled;

  void validate() const;
};

// Per-pixel unit normals from a disparity map. For each valid pixel the slope
// estimates from its valid neighbours are averaged, the raw normal
// (s_x, s_y, -1) is formed and normalized once. Pixels lacking a usable x or
// y neighbour are masked.
NormalMap d2n_transform(const DisparityMap& dm, const StereoRig& rig, const D2NConfig& cfg = {});

struct NormalAngles {
  double alpha_deg = 0.0;  // atan2(n_y, n_x), [0, 360)
  double beta_deg = 0.0;   // elevation above the x-y plane, [-90, 0] when visible
};

// Throws DomainError if n is not unit length within 1e-6. alpha is 0 at the
// beta = -90 pole.
NormalAngles normal_to_angles(const Vec3d& n);
Vec3d angles_to_normal(const NormalAngles& a);

// Rescales every valid pixel to unit length; zero or non-finite vectors are masked.
NormalMap normalize_normals(const NormalMap& nm);

}  // namespace irs
