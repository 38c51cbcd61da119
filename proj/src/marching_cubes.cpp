#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "wanderkit/recon.hpp"

namespace wanderkit {
namespace {

using CaseTable = std::array<std::vector<std::array<std::uint8_t, 3>>, 256>;

Eigen::Vector3d CornerOffset(int c) {
  return Eigen::Vector3d(c & 1, (c >> 1) & 1, (c >> 2) & 1);
}

std::array<CubeEdge, 12> BuildEdges() {
  std::array<CubeEdge, 12> edges{};
  int e = 0;
  for (int axis = 0; axis < 3; ++axis) {
    const int bit = 1 << axis;
    for (int c = 0; c < 8; ++c) {
      if (c & bit) continue;
      edges[e++] = {c, c | bit, axis};
    }
  }
  return edges;
}

int EdgeBetween(const std::array<CubeEdge, 12>& edges, int a, int b) {
  for (int e = 0; e < 12; ++e) {
    if ((edges[e].from == a && edges[e].to == b) || (edges[e].from == b && edges[e].to == a)) {
      return e;
    }
  }
  return -1;
}

// Triangulates an iso-loop. A fan can put a chord inside a cube face; the
// neighbouring cube may pick the same chord and the edge then ends up with
// four triangles. Interval DP picks the triangulation with the fewest such
// chords, then the shortest total chord length.
std::vector<std::array<std::uint8_t, 3>> TriangulateLoop(
    const std::vector<int>& loop, const std::array<Eigen::Vector3d, 12>& mid,
    const std::array<std::array<bool, 12>, 12>& on_face) {
  const int n = static_cast<int>(loop.size());
  std::vector<std::array<std::uint8_t, 3>> out;
  if (n < 3) return out;
  struct Cost {
    int bad = 0;
    double length = 0.0;
    bool operator<(const Cost& o) const {
      return bad != o.bad ? bad < o.bad : length < o.length - 1e-12;
    }
  };
  auto chord = [&](int a, int b) {
    if (b - a == 1 || (a == 0 && b == n - 1)) return Cost{};
    return Cost{on_face[loop[a]][loop[b]] ? 1 : 0, (mid[loop[a]] - mid[loop[b]]).norm()};
  };
  std::vector<std::vector<Cost>> best(n, std::vector<Cost>(n));
  std::vector<std::vector<int>> split(n, std::vector<int>(n, -1));
  for (int len = 2; len < n; ++len) {
    for (int a = 0; a + len < n; ++a) {
      const int b = a + len;
      for (int k = a + 1; k < b; ++k) {
        const Cost l = chord(a, k), r = chord(k, b);
        Cost c{best[a][k].bad + best[k][b].bad + l.bad + r.bad,
               best[a][k].length + best[k][b].length + l.length + r.length};
        if (split[a][b] < 0 || c < best[a][b]) {
          best[a][b] = c;
          split[a][b] = k;
        }
      }
    }
  }
  std::vector<std::pair<int, int>> stack = {{0, n - 1}};
  while (!stack.empty()) {
    const auto [a, b] = stack.back();
    stack.pop_back();
    if (b - a < 2) continue;
    const int k = split[a][b];
    out.push_back({static_cast<std::uint8_t>(loop[a]), static_cast<std::uint8_t>(loop[k]),
                   static_cast<std::uint8_t>(loop[b])});
    stack.push_back({a, k});
    stack.push_back({k, b});
  }
  return out;
}

// The table is derived rather than transcribed. Each cube face contributes
// iso-segments determined only by its own four corners; on a face with two
// diagonal inside corners, each inside corner is cut off separately. The
// two cubes sharing a face therefore agree on its segments, which keeps the
// surface crack-free. Segments are oriented so that, seen from outside the
// cube, the inside corner lies to the right; chaining them gives loops whose
// fan triangulation has normals pointing toward the outside (empty) corners.
CaseTable BuildCaseTable() {
  const std::array<CubeEdge, 12> edges = BuildEdges();
  std::array<Eigen::Vector3d, 12> mid;
  for (int e = 0; e < 12; ++e) {
    mid[e] = 0.5 * (CornerOffset(edges[e].from) + CornerOffset(edges[e].to));
  }

  struct Face {
    std::array<int, 4> corners;  // cyclic order
    Eigen::Vector3d normal;      // outward
  };
  std::vector<Face> faces;
  for (int axis = 0; axis < 3; ++axis) {
    const int u = 1 << ((axis + 1) % 3);
    const int w = 1 << ((axis + 2) % 3);
    for (int side = 0; side < 2; ++side) {
      const int base = side ? (1 << axis) : 0;
      Face f;
      f.corners = {base, base | u, base | u | w, base | w};
      f.normal = Eigen::Vector3d::Zero();
      f.normal[axis] = side ? 1.0 : -1.0;
      faces.push_back(f);
    }
  }

  // on_face[a][b]: cube edges a and b lie on a common cube face.
  std::array<std::array<bool, 12>, 12> on_face{};
  for (const Face& f : faces) {
    std::array<int, 4> fe{};
    for (int k = 0; k < 4; ++k) fe[k] = EdgeBetween(edges, f.corners[k], f.corners[(k + 1) % 4]);
    for (int a : fe)
      for (int b : fe) on_face[a][b] = true;
  }

  CaseTable table;
  for (int config = 0; config < 256; ++config) {
    auto inside = [config](int c) { return (config >> c) & 1; };
    std::array<int, 12> next;
    next.fill(-1);

    auto add_segment = [&](int ea, int eb, int corner, const Eigen::Vector3d& normal) {
      const Eigen::Vector3d p = CornerOffset(corner);
      const double s = (mid[eb] - mid[ea]).cross(p - mid[ea]).dot(normal);
      if (s < 0.0) {
        next[ea] = eb;
      } else {
        next[eb] = ea;
      }
    };

    for (const Face& f : faces) {
      std::array<int, 4> face_edges{};
      std::array<bool, 4> crossed{};
      int n_crossed = 0;
      for (int k = 0; k < 4; ++k) {
        const int a = f.corners[k];
        const int b = f.corners[(k + 1) % 4];
        face_edges[k] = EdgeBetween(edges, a, b);
        crossed[k] = inside(a) != inside(b);
        n_crossed += crossed[k] ? 1 : 0;
      }
      if (n_crossed == 2) {
        int ea = -1, eb = -1;
        for (int k = 0; k < 4; ++k) {
          if (!crossed[k]) continue;
          (ea < 0 ? ea : eb) = face_edges[k];
        }
        int ref = -1;
        for (int c : f.corners) {
          if (inside(c)) ref = c;
        }
        add_segment(ea, eb, ref, f.normal);
      } else if (n_crossed == 4) {
        for (int k = 0; k < 4; ++k) {
          if (!inside(f.corners[k])) continue;
          add_segment(face_edges[(k + 3) % 4], face_edges[k], f.corners[k], f.normal);
        }
      }
    }

    std::array<bool, 12> used{};
    for (int start = 0; start < 12; ++start) {
      if (next[start] < 0 || used[start]) continue;
      std::vector<int> loop;
      for (int e = start; !used[e]; e = next[e]) {
        used[e] = true;
        loop.push_back(e);
      }
      for (const auto& tri : TriangulateLoop(loop, mid, on_face)) table[config].push_back(tri);
    }
  }
  return table;
}

const CaseTable& Table() {
  static const CaseTable table = BuildCaseTable();
  return table;
}

// A triangle as three grid-edge keys: (linear index of the lower grid
// vertex) * 3 + axis.
using EdgeKeyTriangle = std::array<std::uint64_t, 3>;

void MarchSlab(const OccupancyGrid& grid, const std::vector<double>& field, double iso, int k,
               std::vector<EdgeKeyTriangle>& out) {
  const auto& edges = CubeEdges();
  const auto& table = Table();
  const auto [dx, dy, dz] = grid.dims;
  (void)dz;
  for (int j = 0; j + 1 < dy; ++j) {
    for (int i = 0; i + 1 < dx; ++i) {
      int config = 0;
      for (int c = 0; c < 8; ++c) {
        const double v = field[grid.Index(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1))];
        if (v > iso) config |= 1 << c;
      }
      if (config == 0 || config == 255) continue;
      for (const auto& tri : table[config]) {
        EdgeKeyTriangle keys{};
        for (int v = 0; v < 3; ++v) {
          const CubeEdge& e = edges[tri[v]];
          const int c = e.from;
          keys[v] = static_cast<std::uint64_t>(
                        grid.Index(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1))) *
                        3 +
                    static_cast<std::uint64_t>(e.axis);
        }
        out.push_back(keys);
      }
    }
  }
}

}  // namespace

const std::array<CubeEdge, 12>& CubeEdges() {
  static const std::array<CubeEdge, 12> edges = BuildEdges();
  return edges;
}

const std::vector<std::array<std::uint8_t, 3>>& CaseTriangles(int config) {
  return Table().at(static_cast<std::size_t>(config));
}

TriangleMesh MarchingCubes(const OccupancyGrid& grid, const MarchingCubesOptions& options) {
  TriangleMesh mesh;
  const auto [dx, dy, dz] = grid.dims;
  if (dx < 2 || dy < 2 || dz < 2) return mesh;
  const std::vector<double> field = OccupancyField(grid, options.box_smooth);
  const int slabs = dz - 1;

  std::vector<std::vector<EdgeKeyTriangle>> per_slab(static_cast<std::size_t>(slabs));
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < slabs; ++k) {
    MarchSlab(grid, field, options.iso, k, per_slab[k]);
  }

  // Vertex ids follow first use in slab-major order, independent of threads.
  std::unordered_map<std::uint64_t, std::uint32_t> vertex_of_edge;
  const std::size_t plane = static_cast<std::size_t>(dx) * dy;
  for (const auto& slab : per_slab) {
    for (const EdgeKeyTriangle& keys : slab) {
      Triangle tri{};
      for (int v = 0; v < 3; ++v) {
        auto [it, inserted] =
            vertex_of_edge.emplace(keys[v], static_cast<std::uint32_t>(mesh.vertices.size()));
        if (inserted) {
          const std::size_t lin = keys[v] / 3;
          const int axis = static_cast<int>(keys[v] % 3);
          const int i = static_cast<int>(lin % dx);
          const int j = static_cast<int>((lin / dx) % dy);
          const int k = static_cast<int>(lin / plane);
          std::array<int, 3> hi{i, j, k};
          ++hi[axis];
          const double fa = field[lin];
          const double fb = field[grid.Index(hi[0], hi[1], hi[2])];
          const double t = (options.iso - fa) / (fb - fa);
          const Vec3 pa = grid.CellCenter(i, j, k);
          const Vec3 pb = grid.CellCenter(hi[0], hi[1], hi[2]);
          mesh.vertices.push_back(pa + t * (pb - pa));
        }
        tri[v] = it->second;
      }
      mesh.triangles.push_back(tri);
    }
  }
  return mesh;
}

}  // namespace wanderkit
