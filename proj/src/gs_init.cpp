#include "wanderkit/gs_init.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <random>

#include "wanderkit/error.hpp"
#include "wanderkit/kdtree.hpp"
#include "wanderkit/traj_eval.hpp"

namespace wanderkit {

void GaussianSet::Validate() const {
  const std::size_t n = centers.size();
  if (scales.size() != n || opacities.size() != n || colors.size() != n) {
    Fail(ErrorCode::kInvalidArgument, "gaussian attribute arrays differ in length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(scales[i] > 0.0) || !std::isfinite(scales[i])) {
      Fail(ErrorCode::kInvalidArgument,
           "gaussian " + std::to_string(i) + " has non-positive scale " + std::to_string(scales[i]));
    }
    if (!(opacities[i] > 0.0 && opacities[i] <= kMaxInitialOpacity)) {
      Fail(ErrorCode::kInvalidArgument,
           "gaussian " + std::to_string(i) + " opacity outside (0, 0.99]");
    }
    if (!centers[i].allFinite()) {
      Fail(ErrorCode::kInvalidArgument, "gaussian " + std::to_string(i) + " center not finite");
    }
  }
}

CameraIntrinsics CameraIntrinsics::FromFov(double fov_deg, int width, int height) {
  Require(fov_deg > 0.0 && fov_deg < 180.0, "field of view must be in (0, 180)");
  CameraIntrinsics k;
  k.width = width;
  k.height = height;
  k.fx = 0.5 * width / std::tan(0.5 * DegToRad(fov_deg));
  k.fy = k.fx;
  k.cx = 0.5 * width;
  k.cy = 0.5 * height;
  return k;
}

void CameraIntrinsics::Validate() const {
  Require(width > 0 && height > 0, "image size must be positive");
  Require(fx > 0.0 && fy > 0.0, "focal lengths must be positive");
  Require(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height,
          "principal point must lie inside the image");
}

std::size_t DepthMap::HitCount() const {
  return static_cast<std::size_t>(
      std::count_if(depth.begin(), depth.end(), [](float d) { return std::isfinite(d); }));
}

PointCloud DownsampleCloud(const PointCloud& cloud, std::size_t target_count,
                           std::uint64_t seed) {
  Require(target_count >= 1, "target_count must be at least 1");
  if (cloud.size() <= target_count) return cloud;
  std::vector<std::size_t> all(cloud.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> keep;
  keep.reserve(target_count);
  std::mt19937_64 rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(keep), target_count, rng);

  PointCloud out;
  out.points.reserve(keep.size());
  for (std::size_t i : keep) out.points.push_back(cloud.points[i]);
  if (cloud.has_colors()) {
    out.colors.reserve(keep.size());
    for (std::size_t i : keep) out.colors.push_back(cloud.colors[i]);
  }
  if (!cloud.extra.empty()) {
    const std::size_t w = cloud.extra.properties.size();
    out.extra.properties = cloud.extra.properties;
    out.extra.values.reserve(keep.size() * w);
    for (std::size_t i : keep) {
      auto row = cloud.extra.values.begin() + static_cast<std::ptrdiff_t>(i * w);
      out.extra.values.insert(out.extra.values.end(), row, row + static_cast<std::ptrdiff_t>(w));
    }
  }
  return out;
}

std::vector<double> KnnScales(const std::vector<Vec3>& points, std::size_t k,
                              double scale_multiplier) {
  Require(k >= 1, "knn k must be at least 1");
  if (points.size() < k + 1) {
    Fail(ErrorCode::kInvalidArgument, "knn scales need more than k=" + std::to_string(k) +
                                          " points, got " + std::to_string(points.size()));
  }
  const KdTree tree(points);
  std::vector<double> scales(points.size());
  const auto n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto nn = tree.Nearest(points[i], k, static_cast<std::size_t>(i));
    double sum = 0.0;
    for (const auto& nb : nn) sum += std::sqrt(nb.squared_distance);
    scales[i] = scale_multiplier * sum / static_cast<double>(k);
  }
  return scales;
}

std::vector<double> OpacityFromDensity(const std::vector<double>& scales, double max_opacity) {
  Require(max_opacity > 0.0 && max_opacity < 1.0, "max_opacity must be in (0, 1)");
  std::vector<double> out(scales.size());
  if (scales.empty()) return out;
  for (double s : scales) Require(s > 0.0, "opacity_from_density needs positive scales");
  const double median = Median(scales);
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double ratio = median / scales[i];
    out[i] = std::min(max_opacity, max_opacity * ratio * ratio * ratio);
  }
  return out;
}

DepthMap RenderDepth(const GaussianSet& gaussians, const Pose& pose,
                     const CameraIntrinsics& intrinsics, double splat_radius) {
  Require(splat_radius >= 0.0, "splat_radius must be non-negative");
  intrinsics.Validate();
  DepthMap map(intrinsics.width, intrinsics.height);
  const Mat3 camera_from_world = pose.RotationMatrix().transpose();
  const int r = static_cast<int>(std::floor(splat_radius));
  const double r2 = splat_radius * splat_radius;

  for (const Vec3& center : gaussians.centers) {
    const Vec3 pc = camera_from_world * (center - pose.translation);
    if (!(pc.z() > kNearPlane)) continue;
    const double u = intrinsics.fx * pc.x() / pc.z() + intrinsics.cx;
    const double v = intrinsics.fy * pc.y() / pc.z() + intrinsics.cy;
    if (!std::isfinite(u) || !std::isfinite(v)) continue;
    const double fu = std::floor(u);
    const double fv = std::floor(v);
    if (fu < -r || fv < -r || fu >= map.width + r || fv >= map.height + r) continue;
    const int px = static_cast<int>(fu);
    const int py = static_cast<int>(fv);
    const auto depth = static_cast<float>(pc.z());
    for (int dy = -r; dy <= r; ++dy) {
      const int y = py + dy;
      if (y < 0 || y >= map.height) continue;
      for (int dx = -r; dx <= r; ++dx) {
        const int x = px + dx;
        if (x < 0 || x >= map.width || dx * dx + dy * dy > r2) continue;
        float& cell = map.at(x, y);
        cell = std::min(cell, depth);
      }
    }
  }
  return map;
}

std::vector<DepthMap> RenderDepthBatch(const GaussianSet& gaussians, const Trajectory& traj,
                                       const CameraIntrinsics& intrinsics, double splat_radius) {
  std::vector<DepthMap> maps(traj.size());
  const auto n = static_cast<std::int64_t>(traj.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    maps[i] = RenderDepth(gaussians, traj.poses[i], intrinsics, splat_radius);
  }
  return maps;
}

GaussianSet InitializeGaussians(const PointCloud& cloud, const GaussianInitOptions& options) {
  cloud.Validate();
  const PointCloud sampled = DownsampleCloud(cloud, options.target_count, options.seed);
  GaussianSet set;
  set.centers = sampled.points;
  set.scales = KnnScales(sampled.points, options.knn_k, options.scale_multiplier);
  for (double s : set.scales) {
    if (!(s > 0.0)) {
      Fail(ErrorCode::kInvalidArgument,
           "knn scale is zero (duplicate points or zero multiplier); gaussian scales must be "
           "positive");
    }
  }
  set.opacities = OpacityFromDensity(set.scales, options.max_opacity);
  set.colors.reserve(sampled.size());
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    if (sampled.has_colors()) {
      const Rgb8& c = sampled.colors[i];
      set.colors.emplace_back(c[0] / 255.0, c[1] / 255.0, c[2] / 255.0);
    } else {
      set.colors.emplace_back(0.5, 0.5, 0.5);
    }
  }
  set.Validate();
  return set;
}

}  // namespace wanderkit
