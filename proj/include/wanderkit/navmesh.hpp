#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wanderkit/geom.hpp"
#include "wanderkit/mesh.hpp"

namespace wanderkit {

using Vec2 = Eigen::Vector2d;

struct NavMeshOptions {
  double max_slope_deg = 35.0;
  std::size_t min_region_faces = 20;
  Vec3 up = Vec3::UnitZ();
  double weld_tolerance = 1e-6;
};

struct SurfacePoint {
  Vec3 point;
  std::uint32_t triangle = 0;
  double distance = 0.0;  // from the query point
};

// Walkable subset of a collision mesh with shared-edge adjacency. Immutable
// after construction and safe to share across threads.
class NavMesh {
 public:
  struct Link {
    std::uint32_t neighbor;
    std::uint32_t v0, v1;  // shared edge, as navmesh vertex ids
  };

  // Faces within `max_slope_deg` of `up` whose connected walkable region has
  // at least `min_region_faces` faces. Throws kEmptyNavMesh if none remain.
  static NavMesh Bake(const TriangleMesh& mesh, const NavMeshOptions& options = {});

  // Builds a navmesh from an explicit list of source faces, with no slope or
  // region filtering. Used when loading a serialized navmesh.
  static NavMesh FromFaces(const TriangleMesh& source, std::vector<std::uint32_t> source_faces,
                           const Vec3& up = Vec3::UnitZ(), double weld_tolerance = 1e-6);

  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_regions() const { return region_faces_.size(); }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<std::uint32_t>& source_faces() const { return source_faces_; }
  const std::vector<std::vector<Link>>& adjacency() const { return adjacency_; }
  std::uint32_t region(std::uint32_t tri) const { return region_[tri]; }
  const std::vector<std::size_t>& region_faces() const { return region_faces_; }
  const Vec3& up() const { return up_; }
  // True for vertices on an edge that does not have exactly two navmesh faces.
  bool IsBoundaryVertex(std::uint32_t v) const { return boundary_vertex_[v] != 0; }
  const std::vector<std::uint32_t>& TrianglesAtVertex(std::uint32_t v) const {
    return vertex_faces_[v];
  }
  // Boundary vertices a shortest path may bend around (reflex or pinched).
  const std::vector<std::uint32_t>& corner_vertices() const { return corner_vertices_; }
  bool IsCornerVertex(std::uint32_t v) const { return corner_flag_[v] != 0; }

  // Coordinates in the plane orthogonal to `up`, and height along it.
  Vec2 Planar(const Vec3& p) const { return {p.dot(axis_u_), p.dot(axis_v_)}; }
  double Height(const Vec3& p) const { return p.dot(up_); }
  Vec3 PlanarDirection(double heading) const;
  bool InsidePlanarBounds(const Vec2& p) const;

  // Closest point on any navmesh triangle; exact ties go to the lower id.
  SurfacePoint Snap(const Vec3& p) const;
  // The point on the navmesh directly below/above `p` (along `up`) whose
  // height is closest to p's, if within `max_height_diff`.
  std::optional<SurfacePoint> ProjectAlongUp(const Vec3& p, double max_height_diff) const;

 private:
  void BuildTopology();
  void BuildIndex();
  void CellRange(const Vec2& lo, const Vec2& hi, int& x0, int& y0, int& x1, int& y1) const;
  const std::vector<std::uint32_t>& Cell(int x, int y) const {
    return cells_[static_cast<std::size_t>(y) * cells_x_ + x];
  }

  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<std::uint32_t> source_faces_;
  std::vector<std::vector<Link>> adjacency_;
  std::vector<std::uint32_t> region_;
  std::vector<std::size_t> region_faces_;
  std::vector<std::uint8_t> boundary_vertex_;
  std::vector<std::vector<std::uint32_t>> vertex_faces_;
  std::vector<std::uint32_t> corner_vertices_;
  std::vector<std::uint8_t> corner_flag_;
  Vec3 up_ = Vec3::UnitZ();
  Vec3 axis_u_ = Vec3::UnitX();
  Vec3 axis_v_ = Vec3::UnitY();

  // Uniform grid over the planar footprint of the triangles.
  Vec2 grid_lo_ = Vec2::Zero();
  Vec2 grid_hi_ = Vec2::Zero();
  double cell_size_ = 1.0;
  int cells_x_ = 1;
  int cells_y_ = 1;
  std::vector<std::vector<std::uint32_t>> cells_;
};

// Closest point to p on triangle (a, b, c).
Vec3 ClosestPointOnTriangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

struct Path {
  std::vector<Vec3> waypoints;
  double length = 0.0;
};

struct PathOptions {
  // Portal endpoints at corner vertices are pulled inward by this much.
  double agent_radius = 0.2;
  // Endpoints farther than this from the navmesh are rejected.
  double snap_cap = 2.0;
};

// A* over the visibility graph of start, goal and corner vertices picks the
// triangle corridor; string pulling inside it gives the path, with portal
// ends at boundary vertices pulled in by the agent radius. Waypoints include
// every portal crossing, so consecutive waypoints share a triangle. The path
// is computed in a canonical direction, making the result symmetric in
// (start, goal).
Path ShortestPath(const NavMesh& navmesh, const Vec3& start, const Vec3& goal,
                  const PathOptions& options = {});

double GeodesicDistance(const NavMesh& navmesh, const Vec3& a, const Vec3& b,
                        const PathOptions& options = {});

struct EndpointSampling {
  double vicinity = 1.0;       // meters around a camera position
  double min_geodesic = 5.0;   // meters
  std::size_t max_attempts = 1000;
};

// Start/goal pair near camera positions with at least `min_geodesic` path
// length; deterministic for a seed. Throws kSamplingFailure when the attempt
// budget runs out.
std::pair<SurfacePoint, SurfacePoint> SampleEndpoints(const NavMesh& navmesh,
                                                      const Trajectory& cameras,
                                                      const EndpointSampling& sampling,
                                                      std::uint64_t seed,
                                                      const PathOptions& options = {});

}  // namespace wanderkit
