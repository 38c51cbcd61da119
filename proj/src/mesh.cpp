#include "wanderkit/mesh.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>

#include "wanderkit/error.hpp"

namespace wanderkit {
namespace {

struct QuantKey {
  std::int64_t x, y, z;
  bool operator==(const QuantKey&) const = default;
};

struct QuantKeyHash {
  std::size_t operator()(const QuantKey& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(k.y) + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.z) + 0x94D049BB133111EBull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }
  std::uint32_t Find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Union(std::uint32_t a, std::uint32_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace

void PointCloud::Validate() const {
  if (!colors.empty() && colors.size() != points.size()) {
    Fail(ErrorCode::kInvalidArgument, "point cloud has " + std::to_string(colors.size()) +
                                          " colors for " + std::to_string(points.size()) +
                                          " points");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].allFinite()) {
      Fail(ErrorCode::kInvalidArgument, "point " + std::to_string(i) + " is not finite");
    }
  }
  if (!extra.empty() && extra.values.size() != extra.properties.size() * points.size()) {
    Fail(ErrorCode::kInvalidArgument, "pass-through property table has the wrong size");
  }
}

Vec3 TriangleMesh::Centroid(std::size_t face) const {
  const Triangle& t = triangles[face];
  return (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]) / 3.0;
}

Vec3 TriangleMesh::AreaNormal(std::size_t face) const {
  const Triangle& t = triangles[face];
  return (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]);
}

void TriangleMesh::Validate() const {
  const std::size_t nv = vertices.size();
  for (std::size_t f = 0; f < triangles.size(); ++f) {
    const Triangle& t = triangles[f];
    if (t[0] >= nv || t[1] >= nv || t[2] >= nv) {
      Fail(ErrorCode::kInvalidArgument, "face " + std::to_string(f) + " has an out-of-range index");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      Fail(ErrorCode::kInvalidArgument, "face " + std::to_string(f) + " repeats a vertex");
    }
  }
}

std::vector<std::uint32_t> WeldVertices(const std::vector<Vec3>& vertices, double tolerance) {
  Require(tolerance > 0.0, "weld tolerance must be positive");
  std::unordered_map<QuantKey, std::uint32_t, QuantKeyHash> seen;
  seen.reserve(vertices.size());
  std::vector<std::uint32_t> rep(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vec3& v = vertices[i];
    const QuantKey key{std::llround(v.x() / tolerance), std::llround(v.y() / tolerance),
                       std::llround(v.z() / tolerance)};
    auto [it, inserted] = seen.emplace(key, static_cast<std::uint32_t>(i));
    rep[i] = it->second;
  }
  return rep;
}

ComponentLabels LabelComponents(const TriangleMesh& mesh, double weld_tolerance) {
  const std::vector<std::uint32_t> rep = WeldVertices(mesh.vertices, weld_tolerance);
  const std::size_t nf = mesh.triangles.size();
  DisjointSets sets(nf);
  // First face seen at each welded vertex.
  std::vector<std::int64_t> owner(mesh.vertices.size(), -1);
  for (std::size_t f = 0; f < nf; ++f) {
    for (std::uint32_t v : mesh.triangles[f]) {
      const std::uint32_t r = rep[v];
      if (owner[r] < 0) {
        owner[r] = static_cast<std::int64_t>(f);
      } else {
        sets.Union(static_cast<std::uint32_t>(owner[r]), static_cast<std::uint32_t>(f));
      }
    }
  }

  ComponentLabels labels;
  labels.face_component.resize(nf);
  std::unordered_map<std::uint32_t, std::uint32_t> root_to_id;
  for (std::size_t f = 0; f < nf; ++f) {
    const std::uint32_t root = sets.Find(static_cast<std::uint32_t>(f));
    auto [it, inserted] =
        root_to_id.emplace(root, static_cast<std::uint32_t>(labels.component_faces.size()));
    if (inserted) labels.component_faces.push_back(0);
    labels.face_component[f] = it->second;
    ++labels.component_faces[it->second];
  }
  return labels;
}

TriangleMesh SubsetFaces(const TriangleMesh& mesh, const std::vector<std::size_t>& faces) {
  constexpr std::uint32_t kUnused = ~0u;
  std::vector<std::uint32_t> remap(mesh.vertices.size(), kUnused);
  for (std::size_t f : faces) {
    for (std::uint32_t v : mesh.triangles[f]) remap[v] = 0;
  }
  TriangleMesh out;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (remap[v] == kUnused) continue;
    remap[v] = static_cast<std::uint32_t>(out.vertices.size());
    out.vertices.push_back(mesh.vertices[v]);
  }
  out.triangles.reserve(faces.size());
  for (std::size_t f : faces) {
    const Triangle& t = mesh.triangles[f];
    out.triangles.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});
  }
  return out;
}

}  // namespace wanderkit
