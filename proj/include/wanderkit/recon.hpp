#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wanderkit/geom.hpp"
#include "wanderkit/mesh.hpp"

namespace wanderkit {

// Dense voxel grid of point counts. Cell (i, j, k) spans
// origin + voxel_size * [i, i+1) x [j, j+1) x [k, k+1); linear index is
// i + dims[0] * (j + dims[1] * k).
struct OccupancyGrid {
  Vec3 origin = Vec3::Zero();
  double voxel_size = 1.0;
  std::array<int, 3> dims = {1, 1, 1};
  std::vector<std::uint32_t> counts;
  std::uint32_t min_points = 1;

  static OccupancyGrid Empty(const Vec3& origin, double voxel_size, std::array<int, 3> dims);

  std::size_t num_cells() const {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  }
  std::size_t Index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims[1]) * k);
  }
  bool InBounds(int i, int j, int k) const {
    return i >= 0 && j >= 0 && k >= 0 && i < dims[0] && j < dims[1] && k < dims[2];
  }
  bool Occupied(int i, int j, int k) const { return counts[Index(i, j, k)] >= min_points; }
  void SetOccupied(int i, int j, int k, bool occupied) {
    counts[Index(i, j, k)] = occupied ? min_points : 0;
  }
  Vec3 CellCenter(int i, int j, int k) const {
    return origin + voxel_size * Vec3(i + 0.5, j + 0.5, k + 0.5);
  }
  std::array<int, 3> CellOf(const Vec3& p) const;
  std::size_t OccupiedCount() const;
};

// Cell occupied iff it holds at least `min_points_per_voxel` points. Bounds
// are the cloud AABB padded by one voxel on every side.
OccupancyGrid Voxelize(const PointCloud& cloud, double voxel_size,
                       std::uint32_t min_points_per_voxel);

struct MarchingCubesOptions {
  double iso = 0.5;
  // Average occupancy over the 3x3x3 neighbourhood before extraction.
  bool box_smooth = false;
};

// Isosurface of the occupancy field sampled at cell centers. Vertices are
// shared between adjacent cubes; faces are wound so normals point from
// occupied toward empty space. Z-slabs run in parallel; output is identical
// to the serial reference.
TriangleMesh MarchingCubes(const OccupancyGrid& grid, const MarchingCubesOptions& options = {});

// Scalar field sampled at cell centers (0/1 occupancy, optionally smoothed).
std::vector<double> OccupancyField(const OccupancyGrid& grid, bool box_smooth);

// Marching-cubes case table: for each of the 256 corner configurations, the
// triangles as triples of cube-edge ids. Corner c sits at offset
// (c & 1, (c >> 1) & 1, (c >> 2) & 1); corner c is inside when bit c is set.
struct CubeEdge {
  int from;  // corner with the lower coordinate
  int to;
  int axis;
};
const std::array<CubeEdge, 12>& CubeEdges();
const std::vector<std::array<std::uint8_t, 3>>& CaseTriangles(int config);

// Keeps faces whose centroid is within `radius` (inclusive, 3D distance) of
// some camera position and no higher than the lowest camera plus
// `height_cut` along +z.
TriangleMesh CropByTrajectory(const TriangleMesh& mesh, const Trajectory& traj, double radius,
                              double height_cut);

// Drops connected components with fewer than `min_faces` faces.
TriangleMesh FilterSmallComponents(const TriangleMesh& mesh, std::size_t min_faces);

struct MeshExtractionOptions {
  double voxel_size = 0.10;
  std::uint32_t min_points_per_voxel = 2;
  MarchingCubesOptions marching_cubes;
  double crop_radius = 30.0;
  double height_cut = 3.0;
  std::size_t min_component_faces = 50;
};

// voxelize -> marching cubes -> crop -> fragment filter.
TriangleMesh ExtractCollisionMesh(const PointCloud& cloud, const Trajectory& traj,
                                  const MeshExtractionOptions& options);

}  // namespace wanderkit
