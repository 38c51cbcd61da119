#include "wanderkit/serial_reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "wanderkit/error.hpp"

namespace wanderkit::serial {

PairwiseErrors ComputePairwiseErrors(const Trajectory& pred, const Trajectory& gt,
                                     const Mat3& align_rotation, std::size_t max_pairs) {
  Require(pred.size() == gt.size(), "trajectories differ in length");
  PairwiseErrors out;
  out.pairs = SelectPairs(pred.size(), max_pairs);
  for (const auto& [i, j] : out.pairs) {
    const Vec3 d_pred = pred.poses[i].translation - pred.poses[j].translation;
    const Vec3 d_gt = gt.poses[i].translation - gt.poses[j].translation;
    const double n_pred = d_pred.norm();
    const double n_gt = d_gt.norm();
    out.distance_diff.push_back(n_pred - n_gt);
    out.direction_deg.push_back(n_pred < kMinDirectionNorm || n_gt < kMinDirectionNorm
                                    ? std::numeric_limits<double>::quiet_NaN()
                                    : RadToDeg(VectorAngle(align_rotation * d_pred, d_gt)));
    const Mat3 rel_pred = pred.poses[i].RotationMatrix().transpose() * pred.poses[j].RotationMatrix();
    const Mat3 rel_gt = gt.poses[i].RotationMatrix().transpose() * gt.poses[j].RotationMatrix();
    out.rotation_deg.push_back(RadToDeg(RotationAngle(rel_gt, rel_pred)));
  }
  return out;
}

OccupancyGrid Voxelize(const PointCloud& cloud, double voxel_size,
                       std::uint32_t min_points_per_voxel) {
  Require(voxel_size > 0.0, "voxel_size must be positive");
  if (cloud.empty()) {
    OccupancyGrid grid = OccupancyGrid::Empty(Vec3::Zero(), voxel_size, {1, 1, 1});
    grid.min_points = min_points_per_voxel;
    return grid;
  }
  Vec3 lo = cloud.points.front();
  Vec3 hi = lo;
  for (const Vec3& p : cloud.points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  std::array<int, 3> dims{};
  for (int a = 0; a < 3; ++a) dims[a] = static_cast<int>(std::floor((hi[a] - lo[a]) / voxel_size) + 3.0);
  OccupancyGrid grid = OccupancyGrid::Empty(lo - Vec3::Constant(voxel_size), voxel_size, dims);
  grid.min_points = min_points_per_voxel;
  for (const Vec3& p : cloud.points) {
    std::array<int, 3> c = grid.CellOf(p);
    for (int a = 0; a < 3; ++a) c[a] = std::clamp(c[a], 0, dims[a] - 1);
    ++grid.counts[grid.Index(c[0], c[1], c[2])];
  }
  return grid;
}

TriangleMesh MarchingCubes(const OccupancyGrid& grid, const MarchingCubesOptions& options) {
  TriangleMesh mesh;
  const auto [dx, dy, dz] = grid.dims;
  if (dx < 2 || dy < 2 || dz < 2) return mesh;
  const std::vector<double> field = OccupancyField(grid, options.box_smooth);
  const auto& edges = CubeEdges();
  std::unordered_map<std::uint64_t, std::uint32_t> vertex_of_edge;

  for (int k = 0; k + 1 < dz; ++k) {
    for (int j = 0; j + 1 < dy; ++j) {
      for (int i = 0; i + 1 < dx; ++i) {
        int config = 0;
        for (int c = 0; c < 8; ++c) {
          if (field[grid.Index(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1))] > options.iso) {
            config |= 1 << c;
          }
        }
        for (const auto& tri : CaseTriangles(config)) {
          Triangle out{};
          for (int v = 0; v < 3; ++v) {
            const CubeEdge& e = edges[tri[v]];
            std::array<int, 3> a{i + (e.from & 1), j + ((e.from >> 1) & 1), k + ((e.from >> 2) & 1)};
            const std::uint64_t key = static_cast<std::uint64_t>(grid.Index(a[0], a[1], a[2])) * 3 +
                                      static_cast<std::uint64_t>(e.axis);
            auto it = vertex_of_edge.find(key);
            if (it == vertex_of_edge.end()) {
              std::array<int, 3> b = a;
              ++b[e.axis];
              const double fa = field[grid.Index(a[0], a[1], a[2])];
              const double fb = field[grid.Index(b[0], b[1], b[2])];
              const double t = (options.iso - fa) / (fb - fa);
              const Vec3 pa = grid.CellCenter(a[0], a[1], a[2]);
              const Vec3 pb = grid.CellCenter(b[0], b[1], b[2]);
              it = vertex_of_edge.emplace(key, static_cast<std::uint32_t>(mesh.vertices.size())).first;
              mesh.vertices.push_back(pa + t * (pb - pa));
            }
            out[v] = it->second;
          }
          mesh.triangles.push_back(out);
        }
      }
    }
  }
  return mesh;
}

std::vector<double> KnnScales(const std::vector<Vec3>& points, std::size_t k,
                              double scale_multiplier) {
  Require(k >= 1 && points.size() >= k + 1, "knn scales need more than k points");
  std::vector<double> scales(points.size());
  std::vector<std::pair<double, std::size_t>> d(points.size() - 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t m = 0;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j != i) d[m++] = {(points[j] - points[i]).squaredNorm(), j};
    }
    std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
    double sum = 0.0;
    for (std::size_t q = 0; q < k; ++q) sum += std::sqrt(d[q].first);
    scales[i] = scale_multiplier * sum / static_cast<double>(k);
  }
  return scales;
}

namespace {

double ChannelSsim(const Image& a, const Image& b, int c) {
  const auto w1 = SsimWindow1d();
  const int half = kSsimWindow / 2;
  double total = 0.0;
  int count = 0;
  for (int y = half; y + half < a.height; ++y) {
    for (int x = half; x + half < a.width; ++x) {
      double mx = 0, my = 0;
      for (int v = -half; v <= half; ++v) {
        for (int u = -half; u <= half; ++u) {
          const double w = w1[v + half] * w1[u + half];
          mx += w * a.at(x + u, y + v, c);
          my += w * b.at(x + u, y + v, c);
        }
      }
      double vx = 0, vy = 0, cov = 0;
      for (int v = -half; v <= half; ++v) {
        for (int u = -half; u <= half; ++u) {
          const double w = w1[v + half] * w1[u + half];
          const double p = a.at(x + u, y + v, c) - mx;
          const double q = b.at(x + u, y + v, c) - my;
          vx += w * p * p;
          vy += w * q * q;
          cov += w * p * q;
        }
      }
      total += ((2 * mx * my + kSsimC1) * (2 * cov + kSsimC2)) /
               ((mx * mx + my * my + kSsimC1) * (vx + vy + kSsimC2));
      ++count;
    }
  }
  return total / count;
}

}  // namespace

double Ssim(const Image& pred, const Image& gt, const SsimOptions& options) {
  pred.Validate();
  gt.Validate();
  Require(pred.width == gt.width && pred.height == gt.height && pred.channels == gt.channels,
          "image shapes differ");
  Require(pred.width >= kSsimWindow && pred.height >= kSsimWindow, "image smaller than the SSIM window");
  if (options.luminance_only && pred.channels == 3) {
    return ChannelSsim(ToLuminance(pred), ToLuminance(gt), 0);
  }
  double sum = 0.0;
  for (int c = 0; c < pred.channels; ++c) sum += ChannelSsim(pred, gt, c);
  return sum / pred.channels;
}

std::vector<DepthMap> RenderDepthBatch(const GaussianSet& gaussians, const Trajectory& traj,
                                       const CameraIntrinsics& intrinsics, double splat_radius) {
  std::vector<DepthMap> maps;
  maps.reserve(traj.size());
  for (const Pose& pose : traj.poses) {
    maps.push_back(RenderDepth(gaussians, pose, intrinsics, splat_radius));
  }
  return maps;
}

}  // namespace wanderkit::serial
