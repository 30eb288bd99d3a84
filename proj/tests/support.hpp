#pragma once

// Test-only fixtures and brute-force oracles. Nothing here calls the code
// under test for the quantity it checks.

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "irs/camera.hpp"
#include "irs/synth.hpp"
#include "irs/types.hpp"

namespace irs::test {

inline StereoRig make_rig(double fx, double fy, double cx, double cy, double baseline) {
  StereoRig r;
  r.intrinsics = {fx, fy, cx, cy};
  r.baseline = baseline;
  return r;
}

inline DisparityMap constant_disparity(int w, int h, float d) {
  return DisparityMap(w, h, d, true);
}

inline double angle_between_deg(const Vec3d& a, const Vec3d& b) {
  const double c = a.dot(b) / (a.norm() * b.norm());
  return std::acos(std::max(-1.0, std::min(1.0, c))) * 180.0 / 3.14159265358979323846;
}

// Plane through `point` with normal `n`, albedo white.
inline Primitive plane(Vec3d point, Vec3d n, std::array<double, 3> albedo = {1, 1, 1}) {
  return Primitive{Plane{point, n}, albedo};
}

// Unit normal in a cone of `max_tilt_deg` around -z, random azimuth.
inline Vec3d random_camera_facing_normal(std::mt19937_64& rng, double max_tilt_deg) {
  std::uniform_real_distribution<double> tilt(0.0, max_tilt_deg * 3.14159265358979323846 / 180.0);
  std::uniform_real_distribution<double> az(0.0, 2.0 * 3.14159265358979323846);
  const double t = tilt(rng);
  const double a = az(rng);
  return {std::sin(t) * std::cos(a), std::sin(t) * std::sin(a), -std::cos(t)};
}

// Ray/plane depth along the pixel ray by direct substitution: the ray point is
// z * ((u-cx)/fx, (v-cy)/fy, 1), so n . (z r - p0) = 0 gives z.
inline double plane_depth_oracle(const Vec3d& p0, const Vec3d& n, const CameraIntrinsics& k,
                                 double u, double v) {
  const Vec3d r{(u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0};
  return n.dot(p0) / n.dot(r);
}

// Sphere depth by the geometric (closest-approach) construction.
inline std::optional<double> sphere_depth_oracle(const Vec3d& c, double radius,
                                                 const CameraIntrinsics& k, double u, double v) {
  const Vec3d r{(u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0};
  const double len = r.norm();
  const Vec3d dir = r * (1.0 / len);
  const double along = c.dot(dir);
  const double d2 = c.dot(c) - along * along;
  if (d2 > radius * radius) return std::nullopt;
  const double half = std::sqrt(radius * radius - d2);
  const double dist = along - half;
  if (dist <= 0.0) return std::nullopt;
  return dist / len;  // z component of dist * dir
}

// Least-squares plane z = a + b x + c y through points; returns the RMS residual.
inline double plane_fit_rms(const std::vector<Vec3d>& pts) {
  double s[3][3] = {};
  double t[3] = {};
  for (const auto& p : pts) {
    const double row[3] = {1.0, p.x, p.y};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) s[i][j] += row[i] * row[j];
      t[i] += row[i] * p.z;
    }
  }
  // Gaussian elimination with partial pivoting on the 3x3 normal equations.
  double m[3][4];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = s[i][j];
    m[i][3] = t[i];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    for (int j = 0; j < 4; ++j) std::swap(m[col][j], m[piv][j]);
    if (std::abs(m[col][col]) < 1e-300) continue;  // degenerate direction, e.g. constant x
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int j = col; j < 4; ++j) m[r][j] -= f * m[col][j];
    }
  }
  double coef[3];
  for (int i = 0; i < 3; ++i) coef[i] = std::abs(m[i][i]) < 1e-300 ? 0.0 : m[i][3] / m[i][i];
  double ss = 0.0;
  for (const auto& p : pts) {
    const double r = p.z - (coef[0] + coef[1] * p.x + coef[2] * p.y);
    ss += r * r;
  }
  return pts.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(pts.size()));
}

}  // namespace irs::test

namespace doctest {

template <typename T>
struct StringMaker<irs::Vec3<T>> {
  static String convert(const irs::Vec3<T>& v) {
    std::ostringstream os;
    os.precision(17);
    os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
    return os.str().c_str();
  }
};

}  // namespace doctest
