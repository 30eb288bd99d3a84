#pragma once

// Straight-line serial versions of the OpenMP kernels. They exist for the
// equivalence tests and the benchmark; nothing in the toolkit calls them.

#include "irs/d2n.hpp"
#include "irs/dataset_stats.hpp"
#include "irs/pointcloud.hpp"

namespace irs::reference {

NormalMap d2n_transform(const DisparityMap& dm, const StereoRig& rig, const D2NConfig& cfg = {});

Histogram1D disparity_sample_histogram(const DisparityMap& dm, int bins = kDefaultDisparityBins);
Histogram2D normal_angle_sample_histogram(const NormalMap& nm, double bin_deg = kDefaultNormalBinDeg);
Histogram2D brightness_joint_histogram(const RgbImage& left, const RgbImage& right,
                                       const DisparityMap& gt);

double epe(const DisparityMap& pred, const DisparityMap& gt);

PointCloud reconstruct(const DisparityMap& dm, const RgbImage* rgb, const NormalMap* normals,
                       const StereoRig& rig);

}  // namespace irs::reference
