#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "wanderkit/error.hpp"
#include "wanderkit/io.hpp"

namespace wanderkit {
namespace {

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

TriangleMesh ParseObj(std::istream& in) {
  TriangleMesh mesh;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    Fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string kind;
    if (!(ss >> kind) || kind[0] == '#') continue;
    if (kind == "v") {
      double xyz[3];
      for (double& c : xyz) {
        std::string tok;
        if (!(ss >> tok)) fail("vertex needs 3 coordinates");
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), c);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(c)) {
          fail("bad vertex coordinate '" + tok + "'");
        }
      }
      // An optional fourth (w) or color values may follow; they are ignored.
      mesh.vertices.emplace_back(xyz[0], xyz[1], xyz[2]);
    } else if (kind == "f") {
      std::vector<std::uint32_t> poly;
      for (std::string tok; ss >> tok;) {
        const std::string head = tok.substr(0, tok.find('/'));
        long long idx = 0;
        const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
        if (ec != std::errc() || ptr != head.data() + head.size() || idx == 0) {
          fail("bad face index '" + tok + "'");
        }
        const auto n = static_cast<long long>(mesh.vertices.size());
        const long long resolved = idx > 0 ? idx - 1 : n + idx;
        if (resolved < 0 || resolved >= n) fail("face index " + tok + " out of range");
        poly.push_back(static_cast<std::uint32_t>(resolved));
      }
      if (poly.size() < 3) fail("face needs at least 3 vertices");
      for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        mesh.triangles.push_back({poly[0], poly[k], poly[k + 1]});
      }
    }
    // Other record types (vn, vt, g, o, s, usemtl, mtllib, l, ...) carry
    // nothing this library uses.
  }
  return mesh;
}

TriangleMesh ReadObj(const fs::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return ParseObj(in);
  } catch (const Error& e) {
    Fail(e.code(), path.string() + ": " + e.what());
  }
}

void WriteObj(const fs::path& path, const TriangleMesh& mesh) {
  mesh.Validate();
  std::string out;
  out.reserve(mesh.vertices.size() * 64 + mesh.triangles.size() * 24);
  char buf[96];
  for (const Vec3& v : mesh.vertices) {
    const int n = std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    out.append(buf, static_cast<std::size_t>(n));
  }
  for (const Triangle& t : mesh.triangles) {
    const int n = std::snprintf(buf, sizeof buf, "f %u %u %u\n", t[0] + 1, t[1] + 1, t[2] + 1);
    out.append(buf, static_cast<std::size_t>(n));
  }
  WriteTextFile(path, out);
}

TriangleMesh ReadMesh(const fs::path& path) {
  const std::string ext = Lower(path.extension().string());
  if (ext == ".obj") return ReadObj(path);
  if (ext == ".ply") return ReadMeshPly(path);
  Fail(ErrorCode::kParse, path.string() + ": unsupported mesh extension (expected .obj or .ply)");
}

void WriteMesh(const fs::path& path, const TriangleMesh& mesh) {
  const std::string ext = Lower(path.extension().string());
  if (ext == ".ply") {
    WriteMeshPly(path, mesh);
  } else {
    WriteObj(path, mesh);
  }
}

std::string ReadTextFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace wanderkit
