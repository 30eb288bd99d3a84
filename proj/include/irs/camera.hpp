#pragma once

#include "irs/types.hpp"

namespace irs {

struct CameraIntrinsics {
  double fx = 1.0;  // focal length along x, pixels
  double fy = 1.0;  // focal length along y, pixels
  double cx = 0.0;  // principal point, pixels
  double cy = 0.0;

  // Throws DomainError unless fx, fy > 0 and cx, cy finite.
  void validate() const;
};

// Rectified pinhole stereo pair: the right camera sits `baseline` meters
// along +x of the left one.
struct StereoRig {
  CameraIntrinsics intrinsics;
  double baseline = 1.0;

  void validate() const;
};

struct Pixel {
  double u = 0.0;  // column
  double v = 0.0;  // row
};

// Camera frame: x right, y down, z forward.
using Point3D = Vec3d;

// Disparities at or below this are treated as invalid by the map-level ops.
inline constexpr double kEpsilonDisparity = 1e-6;

double disparity_to_depth(double disparity, const StereoRig& rig);
double depth_to_disparity(double depth, const StereoRig& rig);

Point3D backproject(const Pixel& p, double depth, const CameraIntrinsics& k);
Pixel project(const Point3D& pt, const CameraIntrinsics& k);

DepthMap disparity_map_to_depth_map(const DisparityMap& dm, const StereoRig& rig);
DisparityMap depth_map_to_disparity_map(const DepthMap& depth, const StereoRig& rig);

}  // namespace irs
