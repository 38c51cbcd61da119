#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wanderkit/geom.hpp"
#include "wanderkit/gs_init.hpp"
#include "wanderkit/image.hpp"
#include "wanderkit/mesh.hpp"
#include "wanderkit/recon.hpp"

// Readers and writers for the interchange formats; byte-level grammars are
// in docs/formats.md. Every reader throws kParse on malformed content and
// kIo when the file cannot be opened.

namespace wanderkit {

namespace fs = std::filesystem;

// ---- PLY ----

enum class PlyFormat { kAscii, kBinaryLittleEndian };

// Vertex element with x, y, z (any scalar type) and optional uchar
// red/green/blue. Other vertex properties are kept as pass-through; other
// elements are skipped.
PointCloud ReadPointCloudPly(const fs::path& path);
PointCloud ParsePointCloudPly(std::istream& in);
// Coordinates are written as float when every one is exactly representable
// in single precision, otherwise as double, so the round trip is exact.
void WritePointCloudPly(const fs::path& path, const PointCloud& cloud,
                        PlyFormat format = PlyFormat::kBinaryLittleEndian);
void WritePointCloudPly(std::ostream& out, const PointCloud& cloud, PlyFormat format);

// Vertex x, y, z, scale, opacity, red, green, blue.
GaussianSet ReadGaussiansPly(const fs::path& path);
void WriteGaussiansPly(const fs::path& path, const GaussianSet& gaussians);

// Vertex element plus a face element with a vertex_indices list.
TriangleMesh ReadMeshPly(const fs::path& path);
void WriteMeshPly(const fs::path& path, const TriangleMesh& mesh);

// ---- TUM trajectories ----

struct TumLoadReport {
  std::size_t reordered = 0;      // poses that were out of timestamp order
  std::size_t renormalized = 0;   // quaternions off unit norm by more than 1e-9
};

// "timestamp tx ty tz qx qy qz qw" per line, '#' comments and blank lines
// ignored. Poses come back sorted by timestamp.
Trajectory ReadTum(const fs::path& path, TumLoadReport* report = nullptr);
Trajectory ParseTum(std::istream& in, TumLoadReport* report = nullptr);
// 17 significant digits. Poses without a timestamp get their index.
void WriteTum(const fs::path& path, const Trajectory& traj);
std::string FormatTum(const Trajectory& traj);

// ---- OBJ ----

// v and f records only; polygons are fan-triangulated, negative indices are
// relative, texture/normal references after '/' are ignored.
TriangleMesh ReadObj(const fs::path& path);
TriangleMesh ParseObj(std::istream& in);
void WriteObj(const fs::path& path, const TriangleMesh& mesh);

// Dispatches on extension (.obj or .ply).
TriangleMesh ReadMesh(const fs::path& path);
void WriteMesh(const fs::path& path, const TriangleMesh& mesh);

// ---- Images ----

// PNG (8 or 16 bit; alpha dropped), binary PPM (P6) or PGM (P5), detected
// from the file's magic bytes. Values are scaled by 1/maxval.
Image ReadImage(const fs::path& path);
// 8-bit; values are rounded to the nearest level.
void WritePng(const fs::path& path, const Image& image);
void WritePnm(const fs::path& path, const Image& image);

// ---- Binary artifacts ----

void WriteOccupancyGrid(const fs::path& path, const OccupancyGrid& grid);
// Occupied cells come back with count = min_points = 1.
OccupancyGrid ReadOccupancyGrid(const fs::path& path);

void WriteDepthMap(const fs::path& path, const DepthMap& map);
DepthMap ReadDepthMap(const fs::path& path);

// Whole-file helpers.
std::string ReadTextFile(const fs::path& path);
void WriteTextFile(const fs::path& path, const std::string& text);

}  // namespace wanderkit
