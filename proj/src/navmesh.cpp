#include "wanderkit/navmesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <unordered_map>

#include "wanderkit/error.hpp"

namespace wanderkit {
namespace {

constexpr std::size_t kMaxIndexCells = std::size_t{1} << 22;

std::uint64_t EdgeKey(std::uint32_t a, std::uint32_t b) {
  if (b < a) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

Vec3 ClosestPointOnTriangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Voronoi-region walk (Ericson, Real-Time Collision Detection, 5.1.5).
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

NavMesh NavMesh::Bake(const TriangleMesh& mesh, const NavMeshOptions& options) {
  Require(options.max_slope_deg > 0.0 && options.max_slope_deg < 90.0,
          "max_slope must be in (0, 90) degrees");
  Require(options.up.norm() > 0.0, "up axis must be non-zero");
  mesh.Validate();
  const Vec3 up = options.up.normalized();
  const double min_cos = std::cos(DegToRad(options.max_slope_deg));
  const std::vector<std::uint32_t> rep = WeldVertices(mesh.vertices, options.weld_tolerance);

  std::vector<std::uint32_t> walkable;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Triangle& t = mesh.triangles[f];
    if (rep[t[0]] == rep[t[1]] || rep[t[1]] == rep[t[2]] || rep[t[0]] == rep[t[2]]) continue;
    const Vec3 n = mesh.AreaNormal(f);
    const double len = n.norm();
    if (!(len > 0.0)) continue;
    if (n.dot(up) / len >= min_cos) walkable.push_back(static_cast<std::uint32_t>(f));
  }
  if (walkable.empty()) Fail(ErrorCode::kEmptyNavMesh, "no walkable faces in mesh");

  const NavMesh all = FromFaces(mesh, walkable, up, options.weld_tolerance);
  std::vector<std::uint32_t> kept;
  for (std::uint32_t t = 0; t < all.num_triangles(); ++t) {
    if (all.region_faces_[all.region_[t]] >= options.min_region_faces) {
      kept.push_back(all.source_faces_[t]);
    }
  }
  if (kept.empty()) {
    Fail(ErrorCode::kEmptyNavMesh, "every walkable region is smaller than min_region_faces");
  }
  if (kept.size() == walkable.size()) return all;
  return FromFaces(mesh, std::move(kept), up, options.weld_tolerance);
}

NavMesh NavMesh::FromFaces(const TriangleMesh& source, std::vector<std::uint32_t> source_faces,
                           const Vec3& up, double weld_tolerance) {
  Require(up.norm() > 0.0, "up axis must be non-zero");
  const std::vector<std::uint32_t> rep = WeldVertices(source.vertices, weld_tolerance);
  NavMesh nav;
  nav.up_ = up.normalized();
  const Vec3 helper = std::abs(nav.up_.dot(Vec3::UnitY())) < 0.9 ? Vec3::UnitY() : Vec3::UnitZ();
  nav.axis_u_ = helper.cross(nav.up_).normalized();
  nav.axis_v_ = nav.up_.cross(nav.axis_u_);

  constexpr std::uint32_t kUnset = ~0u;
  std::vector<std::uint32_t> remap(source.vertices.size(), kUnset);
  nav.triangles_.reserve(source_faces.size());
  for (std::uint32_t f : source_faces) {
    if (f >= source.num_faces()) {
      Fail(ErrorCode::kParse, "navmesh face " + std::to_string(f) + " is not in the source mesh");
    }
    Triangle tri{};
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t r = rep[source.triangles[f][k]];
      if (remap[r] == kUnset) {
        remap[r] = static_cast<std::uint32_t>(nav.vertices_.size());
        nav.vertices_.push_back(source.vertices[r]);
      }
      tri[k] = remap[r];
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      Fail(ErrorCode::kInvalidArgument,
           "navmesh face " + std::to_string(f) + " collapses after vertex welding");
    }
    nav.triangles_.push_back(tri);
  }
  nav.source_faces_ = std::move(source_faces);
  nav.BuildTopology();
  nav.BuildIndex();
  return nav;
}

void NavMesh::BuildTopology() {
  const std::size_t nt = triangles_.size();
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> edge_faces;
  edge_faces.reserve(nt * 2);
  for (std::uint32_t t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      edge_faces[EdgeKey(triangles_[t][k], triangles_[t][(k + 1) % 3])].push_back(t);
    }
  }

  adjacency_.assign(nt, {});
  boundary_vertex_.assign(vertices_.size(), 0);
  vertex_faces_.assign(vertices_.size(), {});
  for (std::uint32_t t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      vertex_faces_[triangles_[t][k]].push_back(t);
      const std::uint32_t a = triangles_[t][k];
      const std::uint32_t b = triangles_[t][(k + 1) % 3];
      const auto& faces = edge_faces[EdgeKey(a, b)];
      if (faces.size() != 2) {
        boundary_vertex_[a] = 1;
        boundary_vertex_[b] = 1;
      }
      for (std::uint32_t other : faces) {
        if (other != t) adjacency_[t].push_back({other, std::min(a, b), std::max(a, b)});
      }
    }
  }

  // Corners: boundary vertices where the walkable fan turns through more
  // than a half-plane, or where the boundary pinches. Only these can be
  // interior points of a taut path.
  std::vector<int> boundary_edges(vertices_.size(), 0);
  for (const auto& [key, faces] : edge_faces) {
    if (faces.size() == 2) continue;
    ++boundary_edges[key >> 32];
    ++boundary_edges[key & 0xffffffffu];
  }
  corner_vertices_.clear();
  corner_flag_.assign(vertices_.size(), 0);
  for (std::uint32_t v = 0; v < vertices_.size(); ++v) {
    if (!boundary_vertex_[v]) continue;
    double fan = 0.0;
    const Vec2 pv = Planar(vertices_[v]);
    for (std::uint32_t t : vertex_faces_[v]) {
      Vec2 others[2];
      int n = 0;
      for (std::uint32_t u : triangles_[t]) {
        if (u != v && n < 2) others[n++] = Planar(vertices_[u]) - pv;
      }
      fan += std::atan2(std::abs(others[0].x() * others[1].y() - others[0].y() * others[1].x()),
                        others[0].dot(others[1]));
    }
    if (fan > kPi + 1e-9 || boundary_edges[v] != 2) {
      corner_vertices_.push_back(v);
      corner_flag_[v] = 1;
    }
  }

  constexpr std::uint32_t kUnset = ~0u;
  region_.assign(nt, kUnset);
  region_faces_.clear();
  for (std::uint32_t seed = 0; seed < nt; ++seed) {
    if (region_[seed] != kUnset) continue;
    const auto id = static_cast<std::uint32_t>(region_faces_.size());
    std::size_t count = 0;
    std::queue<std::uint32_t> queue;
    queue.push(seed);
    region_[seed] = id;
    while (!queue.empty()) {
      const std::uint32_t t = queue.front();
      queue.pop();
      ++count;
      for (const Link& link : adjacency_[t]) {
        if (region_[link.neighbor] == kUnset) {
          region_[link.neighbor] = id;
          queue.push(link.neighbor);
        }
      }
    }
    region_faces_.push_back(count);
  }
}

void NavMesh::BuildIndex() {
  cells_.clear();
  if (triangles_.empty()) return;
  grid_lo_ = Vec2::Constant(std::numeric_limits<double>::infinity());
  grid_hi_ = -grid_lo_;
  double edge_sum = 0.0;
  for (const Triangle& t : triangles_) {
    for (int k = 0; k < 3; ++k) {
      const Vec2 p = Planar(vertices_[t[k]]);
      grid_lo_ = grid_lo_.cwiseMin(p);
      grid_hi_ = grid_hi_.cwiseMax(p);
      edge_sum += (Planar(vertices_[t[(k + 1) % 3]]) - p).norm();
    }
  }
  const Vec2 extent = grid_hi_ - grid_lo_;
  const double mean_edge = edge_sum / (3.0 * static_cast<double>(triangles_.size()));
  cell_size_ = std::max({2.0 * mean_edge, extent.maxCoeff() / 2048.0, 1e-3});
  while (true) {
    cells_x_ = static_cast<int>(std::floor(extent.x() / cell_size_)) + 1;
    cells_y_ = static_cast<int>(std::floor(extent.y() / cell_size_)) + 1;
    if (static_cast<std::size_t>(cells_x_) * cells_y_ <= kMaxIndexCells) break;
    cell_size_ *= 2.0;
  }
  cells_.assign(static_cast<std::size_t>(cells_x_) * cells_y_, {});
  for (std::uint32_t t = 0; t < triangles_.size(); ++t) {
    Vec2 lo = Planar(vertices_[triangles_[t][0]]);
    Vec2 hi = lo;
    for (int k = 1; k < 3; ++k) {
      lo = lo.cwiseMin(Planar(vertices_[triangles_[t][k]]));
      hi = hi.cwiseMax(Planar(vertices_[triangles_[t][k]]));
    }
    int x0, y0, x1, y1;
    CellRange(lo, hi, x0, y0, x1, y1);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) cells_[static_cast<std::size_t>(y) * cells_x_ + x].push_back(t);
    }
  }
}

void NavMesh::CellRange(const Vec2& lo, const Vec2& hi, int& x0, int& y0, int& x1,
                        int& y1) const {
  auto cell = [&](double v, double origin, int n) {
    const double c = std::floor((v - origin) / cell_size_);
    return static_cast<int>(std::clamp(c, 0.0, static_cast<double>(n - 1)));
  };
  x0 = cell(lo.x(), grid_lo_.x(), cells_x_);
  y0 = cell(lo.y(), grid_lo_.y(), cells_y_);
  x1 = cell(hi.x(), grid_lo_.x(), cells_x_);
  y1 = cell(hi.y(), grid_lo_.y(), cells_y_);
}

Vec3 NavMesh::PlanarDirection(double heading) const {
  return std::cos(heading) * axis_u_ + std::sin(heading) * axis_v_;
}

bool NavMesh::InsidePlanarBounds(const Vec2& p) const {
  return p.x() >= grid_lo_.x() && p.y() >= grid_lo_.y() && p.x() <= grid_hi_.x() &&
         p.y() <= grid_hi_.y();
}

SurfacePoint NavMesh::Snap(const Vec3& p) const {
  if (triangles_.empty()) Fail(ErrorCode::kEmptyNavMesh, "snap on an empty navmesh");
  int cx, cy, unused_x, unused_y;
  const Vec2 q = Planar(p);
  CellRange(q, q, cx, cy, unused_x, unused_y);

  SurfacePoint best;
  double best_d2 = std::numeric_limits<double>::infinity();
  auto visit = [&](int x, int y) {
    for (std::uint32_t t : Cell(x, y)) {
      const Triangle& tri = triangles_[t];
      const Vec3 c = ClosestPointOnTriangle(p, vertices_[tri[0]], vertices_[tri[1]],
                                            vertices_[tri[2]]);
      const double d2 = (c - p).squaredNorm();
      if (d2 < best_d2 || (d2 == best_d2 && t < best.triangle)) {
        best_d2 = d2;
        best.point = c;
        best.triangle = t;
      }
    }
  };

  const int max_ring = std::max(cells_x_, cells_y_);
  for (int r = 0; r <= max_ring; ++r) {
    // Every cell in ring r is at least (r - 1) cells away in the plane.
    const double bound = std::max(0, r - 1) * cell_size_;
    if (best_d2 < bound * bound) break;
    for (int y = cy - r; y <= cy + r; ++y) {
      if (y < 0 || y >= cells_y_) continue;
      const bool edge_row = (y == cy - r || y == cy + r);
      for (int x = cx - r; x <= cx + r; x += (edge_row ? 1 : 2 * r)) {
        if (x >= 0 && x < cells_x_) visit(x, y);
        if (r == 0) break;
      }
    }
  }
  best.distance = std::sqrt(best_d2);
  return best;
}

std::optional<SurfacePoint> NavMesh::ProjectAlongUp(const Vec3& p, double max_height_diff) const {
  const Vec2 q = Planar(p);
  if (triangles_.empty() || !InsidePlanarBounds(q)) return std::nullopt;
  int cx, cy, unused_x, unused_y;
  CellRange(q, q, cx, cy, unused_x, unused_y);
  const double hp = Height(p);
  constexpr double kBaryTol = 1e-9;

  std::optional<SurfacePoint> best;
  for (std::uint32_t t : Cell(cx, cy)) {
    const Triangle& tri = triangles_[t];
    const Vec2 a = Planar(vertices_[tri[0]]);
    const Vec2 b = Planar(vertices_[tri[1]]);
    const Vec2 c = Planar(vertices_[tri[2]]);
    const double area = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    if (area == 0.0) continue;
    const double l1 = ((q - a).x() * (c - a).y() - (q - a).y() * (c - a).x()) / area;
    const double l2 = ((b - a).x() * (q - a).y() - (b - a).y() * (q - a).x()) / area;
    const double l0 = 1.0 - l1 - l2;
    if (l0 < -kBaryTol || l1 < -kBaryTol || l2 < -kBaryTol) continue;
    const Vec3 on = l0 * vertices_[tri[0]] + l1 * vertices_[tri[1]] + l2 * vertices_[tri[2]];
    // Keep the planar position exact; only the height comes from the surface.
    const Vec3 point = p + (Height(on) - hp) * up_;
    const double dh = std::abs(Height(on) - hp);
    if (dh > max_height_diff) continue;
    if (!best || dh < best->distance || (dh == best->distance && t < best->triangle)) {
      best = SurfacePoint{point, t, dh};
    }
  }
  return best;
}

}  // namespace wanderkit
