#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wanderkit/geom.hpp"

namespace wanderkit {

using Rgb8 = std::array<std::uint8_t, 3>;

// PLY properties this library does not interpret, carried through a
// read/write cycle. `values` is row-major, one row per point.
struct PlyPassthrough {
  struct Property {
    std::string name;
    std::string type;  // PLY scalar type name as written in the header
  };
  std::vector<Property> properties;
  std::vector<double> values;

  bool empty() const { return properties.empty(); }
};

struct PointCloud {
  std::vector<Vec3> points;
  std::vector<Rgb8> colors;  // empty, or one per point
  PlyPassthrough extra;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_colors() const { return !colors.empty(); }
  void Validate() const;
};

using Triangle = std::array<std::uint32_t, 3>;

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;

  std::size_t num_faces() const { return triangles.size(); }
  bool empty() const { return triangles.empty(); }

  Vec3 Centroid(std::size_t face) const;
  // Unnormalized (twice the area) face normal following winding order.
  Vec3 AreaNormal(std::size_t face) const;
  // Throws on out-of-range indices or repeated indices within a face.
  void Validate() const;
};

// Maps every vertex to a canonical representative; vertices whose coordinates
// agree after quantization to `tolerance` meters share a representative.
// Representatives are the first occurrence, so the map is idempotent.
std::vector<std::uint32_t> WeldVertices(const std::vector<Vec3>& vertices,
                                        double tolerance = 1e-6);

struct ComponentLabels {
  std::vector<std::uint32_t> face_component;  // component id per face
  std::vector<std::size_t> component_faces;   // face count per component
};

// Connected components over shared (welded) vertices. Component ids are
// assigned in order of each component's lowest face index.
ComponentLabels LabelComponents(const TriangleMesh& mesh, double weld_tolerance = 1e-6);

// Keeps the listed faces (in order) and drops unreferenced vertices; vertex
// order is preserved.
TriangleMesh SubsetFaces(const TriangleMesh& mesh, const std::vector<std::size_t>& faces);

}  // namespace wanderkit
