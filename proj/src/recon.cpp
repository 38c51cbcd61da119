#include "wanderkit/recon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "wanderkit/error.hpp"

namespace wanderkit {
namespace {

// Hash grid over camera positions answering "is p within r of any camera".
class CameraProximity {
 public:
  CameraProximity(const std::vector<Vec3>& cameras, double radius)
      : cameras_(cameras), radius_(radius) {
    if (!std::isfinite(radius_)) return;
    cell_ = std::max(radius_, 1e-6);
    for (std::size_t i = 0; i < cameras_.size(); ++i) {
      cells_[Key(cameras_[i])].push_back(static_cast<std::uint32_t>(i));
    }
  }

  bool Within(const Vec3& p) const {
    if (cameras_.empty()) return false;
    if (!std::isfinite(radius_)) return true;
    const CellKey c = Key(p);
    const double r2 = radius_ * radius_;
    for (int dz = -1; dz <= 1; ++dz) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          auto it = cells_.find({c.x + dx, c.y + dy, c.z + dz});
          if (it == cells_.end()) continue;
          for (std::uint32_t i : it->second) {
            if ((cameras_[i] - p).squaredNorm() <= r2) return true;
          }
        }
      }
    }
    return false;
  }

 private:
  struct CellKey {
    std::int64_t x, y, z;
    bool operator==(const CellKey&) const = default;
  };
  struct CellHash {
    std::size_t operator()(const CellKey& k) const noexcept {
      return static_cast<std::size_t>(k.x * 73856093ll ^ k.y * 19349663ll ^ k.z * 83492791ll);
    }
  };
  CellKey Key(const Vec3& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x() / cell_)),
            static_cast<std::int64_t>(std::floor(p.y() / cell_)),
            static_cast<std::int64_t>(std::floor(p.z() / cell_))};
  }

  const std::vector<Vec3>& cameras_;
  double radius_;
  double cell_ = 1.0;
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> cells_;
};

// Dense grids beyond this many cells are refused rather than allocated.
constexpr std::size_t kMaxGridCells = std::size_t{1} << 31;

}  // namespace

OccupancyGrid OccupancyGrid::Empty(const Vec3& origin, double voxel_size,
                                   std::array<int, 3> dims) {
  Require(voxel_size > 0.0, "voxel_size must be positive");
  Require(dims[0] > 0 && dims[1] > 0 && dims[2] > 0, "grid dims must be positive");
  OccupancyGrid grid;
  grid.origin = origin;
  grid.voxel_size = voxel_size;
  grid.dims = dims;
  grid.counts.assign(grid.num_cells(), 0);
  return grid;
}

std::array<int, 3> OccupancyGrid::CellOf(const Vec3& p) const {
  std::array<int, 3> c{};
  for (int a = 0; a < 3; ++a) {
    c[a] = static_cast<int>(std::floor((p[a] - origin[a]) / voxel_size));
  }
  return c;
}

std::size_t OccupancyGrid::OccupiedCount() const {
  std::size_t n = 0;
  for (std::uint32_t c : counts) n += c >= min_points ? 1 : 0;
  return n;
}

OccupancyGrid Voxelize(const PointCloud& cloud, double voxel_size,
                       std::uint32_t min_points_per_voxel) {
  Require(voxel_size > 0.0, "voxel_size must be positive");
  Require(min_points_per_voxel >= 1, "min_points_per_voxel must be at least 1");
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
  std::size_t cells = 1;
  for (int a = 0; a < 3; ++a) {
    const double span = std::floor((hi[a] - lo[a]) / voxel_size) + 3.0;
    if (span > static_cast<double>(kMaxGridCells)) {
      Fail(ErrorCode::kInvalidArgument, "occupancy grid too large; increase voxel_size");
    }
    dims[a] = static_cast<int>(span);
    cells *= static_cast<std::size_t>(dims[a]);
    if (cells > kMaxGridCells) {
      Fail(ErrorCode::kInvalidArgument, "occupancy grid too large; increase voxel_size");
    }
  }

  OccupancyGrid grid = OccupancyGrid::Empty(lo - Vec3::Constant(voxel_size), voxel_size, dims);
  grid.min_points = min_points_per_voxel;

  const auto n = static_cast<std::int64_t>(cloud.size());
  std::vector<std::size_t> cell_of(cloud.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t p = 0; p < n; ++p) {
    std::array<int, 3> c = grid.CellOf(cloud.points[p]);
    for (int a = 0; a < 3; ++a) c[a] = std::clamp(c[a], 0, dims[a] - 1);
    cell_of[p] = grid.Index(c[0], c[1], c[2]);
  }
  std::uint32_t* counts = grid.counts.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t p = 0; p < n; ++p) {
#pragma omp atomic update
    ++counts[cell_of[p]];
  }
  return grid;
}

std::vector<double> OccupancyField(const OccupancyGrid& grid, bool box_smooth) {
  const std::size_t n = grid.num_cells();
  std::vector<double> field(n);
  for (std::size_t c = 0; c < n; ++c) field[c] = grid.counts[c] >= grid.min_points ? 1.0 : 0.0;
  if (!box_smooth) return field;

  std::vector<double> smoothed(n);
  const auto [dx, dy, dz] = grid.dims;
#pragma omp parallel for schedule(static)
  for (int k = 0; k < dz; ++k) {
    for (int j = 0; j < dy; ++j) {
      for (int i = 0; i < dx; ++i) {
        double sum = 0.0;
        for (int c = -1; c <= 1; ++c) {
          for (int b = -1; b <= 1; ++b) {
            for (int a = -1; a <= 1; ++a) {
              if (grid.InBounds(i + a, j + b, k + c)) sum += field[grid.Index(i + a, j + b, k + c)];
            }
          }
        }
        smoothed[grid.Index(i, j, k)] = sum / 27.0;
      }
    }
  }
  return smoothed;
}

TriangleMesh CropByTrajectory(const TriangleMesh& mesh, const Trajectory& traj, double radius,
                              double height_cut) {
  Require(!traj.empty(), "crop_by_trajectory needs a non-empty trajectory");
  Require(radius > 0.0, "crop radius must be positive");
  const std::vector<Vec3> cameras = traj.Positions();
  double lowest = std::numeric_limits<double>::infinity();
  for (const Vec3& c : cameras) lowest = std::min(lowest, c.z());
  const double ceiling = lowest + height_cut;

  const CameraProximity near(cameras, radius);
  const auto nf = static_cast<std::int64_t>(mesh.num_faces());
  std::vector<std::uint8_t> keep(mesh.num_faces());
#pragma omp parallel for schedule(static)
  for (std::int64_t f = 0; f < nf; ++f) {
    const Vec3 c = mesh.Centroid(static_cast<std::size_t>(f));
    keep[f] = (c.z() <= ceiling && near.Within(c)) ? 1 : 0;
  }
  std::vector<std::size_t> faces;
  for (std::size_t f = 0; f < keep.size(); ++f) {
    if (keep[f]) faces.push_back(f);
  }
  return SubsetFaces(mesh, faces);
}

TriangleMesh FilterSmallComponents(const TriangleMesh& mesh, std::size_t min_faces) {
  if (min_faces == 0) return mesh;
  const ComponentLabels labels = LabelComponents(mesh);
  std::vector<std::size_t> faces;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    if (labels.component_faces[labels.face_component[f]] >= min_faces) faces.push_back(f);
  }
  if (faces.size() == mesh.num_faces()) return mesh;
  return SubsetFaces(mesh, faces);
}

TriangleMesh ExtractCollisionMesh(const PointCloud& cloud, const Trajectory& traj,
                                  const MeshExtractionOptions& options) {
  Require(!traj.empty(), "mesh extraction needs a non-empty trajectory");
  // Drop points that cannot contribute to any kept face before allocating
  // the dense grid; faces sit within a voxel diagonal of their points.
  PointCloud near;
  const double slack = options.voxel_size * std::sqrt(3.0) * 2.0;
  const std::vector<Vec3> cameras = traj.Positions();
  const CameraProximity proximity(cameras, options.crop_radius + slack);
  for (const Vec3& p : cloud.points) {
    if (proximity.Within(p)) near.points.push_back(p);
  }
  const OccupancyGrid grid =
      Voxelize(near, options.voxel_size, options.min_points_per_voxel);
  TriangleMesh mesh = MarchingCubes(grid, options.marching_cubes);
  mesh = CropByTrajectory(mesh, traj, options.crop_radius, options.height_cut);
  return FilterSmallComponents(mesh, options.min_component_faces);
}

}  // namespace wanderkit
