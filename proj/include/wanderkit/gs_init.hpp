#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "wanderkit/geom.hpp"
#include "wanderkit/mesh.hpp"

namespace wanderkit {

inline constexpr double kMaxInitialOpacity = 0.99;

// Isotropic Gaussians for splat initialization.
struct GaussianSet {
  std::vector<Vec3> centers;
  std::vector<double> scales;     // meters, > 0
  std::vector<double> opacities;  // (0, 0.99]
  std::vector<Vec3> colors;       // rgb in [0, 1]

  std::size_t size() const { return centers.size(); }
  void Validate() const;
};

struct CameraIntrinsics {
  double fx = 0.0, fy = 0.0;
  double cx = 0.0, cy = 0.0;
  int width = 0, height = 0;

  // Square pinhole with the given horizontal field of view.
  static CameraIntrinsics FromFov(double fov_deg, int width, int height);
  void Validate() const;
};

struct DepthMap {
  static constexpr float kNoData = std::numeric_limits<float>::infinity();

  int width = 0;
  int height = 0;
  std::vector<float> depth;  // row-major, meters

  DepthMap() = default;
  DepthMap(int w, int h) : width(w), height(h), depth(static_cast<std::size_t>(w) * h, kNoData) {}

  float& at(int x, int y) { return depth[static_cast<std::size_t>(y) * width + x]; }
  float at(int x, int y) const { return depth[static_cast<std::size_t>(y) * width + x]; }
  std::size_t HitCount() const;
};

// Uniform sample without replacement, deterministic for a seed; point order
// is preserved. Returned unchanged when already at or below target.
PointCloud DownsampleCloud(const PointCloud& cloud, std::size_t target_count, std::uint64_t seed);

// scale_i = multiplier * mean distance to the k nearest other points.
std::vector<double> KnnScales(const std::vector<Vec3>& points, std::size_t k,
                              double scale_multiplier);

// opacity_i = min(max_opacity, max_opacity * (median / s_i)^3): inverse to
// the Gaussian's volume relative to the median one.
std::vector<double> OpacityFromDensity(const std::vector<double>& scales, double max_opacity);

inline constexpr double kNearPlane = 0.01;

// Z-buffered point splatting of Gaussian centers into a pinhole camera with
// pose world_from_camera (+z forward, +x right, +y down). Each center stamps
// a disc of `splat_radius` pixels.
DepthMap RenderDepth(const GaussianSet& gaussians, const Pose& pose,
                     const CameraIntrinsics& intrinsics, double splat_radius);

// One map per pose; cameras render in parallel.
std::vector<DepthMap> RenderDepthBatch(const GaussianSet& gaussians, const Trajectory& traj,
                                       const CameraIntrinsics& intrinsics, double splat_radius);

struct GaussianInitOptions {
  std::size_t target_count = 5'000'000;
  std::size_t knn_k = 3;
  double scale_multiplier = 1.0;
  double max_opacity = kMaxInitialOpacity;
  double splat_radius = 1.0;
  std::uint64_t seed = 0;
};

GaussianSet InitializeGaussians(const PointCloud& cloud, const GaussianInitOptions& options);

}  // namespace wanderkit
