#include "irs/camera.hpp"

#include <cmath>
#include <string>

#include "irs/parallel.hpp"

namespace irs {

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !std::isfinite(fx) || !(fy > 0.0) || !std::isfinite(fy)) {
    throw DomainError("focal lengths must be finite and positive");
  }
  if (!std::isfinite(cx) || !std::isfinite(cy)) {
    throw DomainError("principal point must be finite");
  }
}

void StereoRig::validate() const {
  intrinsics.validate();
  if (!(baseline > 0.0) || !std::isfinite(baseline)) {
    throw DomainError("baseline must be finite and positive");
  }
}

double disparity_to_depth(double disparity, const StereoRig& rig) {
  if (!(disparity > 0.0) || !std::isfinite(disparity)) {
    throw DomainError("invalid disparity " + std::to_string(disparity));
  }
  return rig.intrinsics.fx * rig.baseline / disparity;
}

double depth_to_disparity(double depth, const StereoRig& rig) {
  if (!(depth > 0.0) || !std::isfinite(depth)) {
    throw DomainError("invalid depth " + std::to_string(depth));
  }
  return rig.intrinsics.fx * rig.baseline / depth;
}

Point3D backproject(const Pixel& p, double depth, const CameraIntrinsics& k) {
  if (!(depth > 0.0) || !std::isfinite(depth)) {
    throw DomainError("invalid depth " + std::to_string(depth));
  }
  return {(p.u - k.cx) * depth / k.fx, (p.v - k.cy) * depth / k.fy, depth};
}

Pixel project(const Point3D& pt, const CameraIntrinsics& k) {
  if (!(pt.z > 0.0)) throw DomainError("point is behind the camera");
  return {k.fx * pt.x / pt.z + k.cx, k.fy * pt.y / pt.z + k.cy};
}

DepthMap disparity_map_to_depth_map(const DisparityMap& dm, const StereoRig& rig) {
  rig.validate();
  DepthMap out(dm.width(), dm.height());
  const double fb = rig.intrinsics.fx * rig.baseline;
  const auto n = static_cast<std::ptrdiff_t>(dm.size());
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double d = dm.values()[idx];
    if (dm.valid_at(idx) && std::isfinite(d) && d > kEpsilonDisparity) {
      const double z = fb / d;
      if (std::isfinite(z)) {
        out.values()[idx] = static_cast<float>(z);
        out.set_valid(idx, true);
        continue;
      }
    }
    out.values()[idx] = 0.0f;
  }
  return out;
}

DisparityMap depth_map_to_disparity_map(const DepthMap& depth, const StereoRig& rig) {
  rig.validate();
  DisparityMap out(depth.width(), depth.height());
  const double fb = rig.intrinsics.fx * rig.baseline;
  const auto n = static_cast<std::ptrdiff_t>(depth.size());
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double z = depth.values()[idx];
    if (depth.valid_at(idx) && std::isfinite(z) && z > 0.0) {
      const double d = fb / z;
      if (std::isfinite(d) && d > kEpsilonDisparity) {
        out.values()[idx] = static_cast<float>(d);
        out.set_valid(idx, true);
      }
    }
  }
  return out;
}

}  // namespace irs
