#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "wanderkit/geom.hpp"
#include "wanderkit/mesh.hpp"
#include "wanderkit/recon.hpp"

// Fixture builders shared by the unit tests and the acceptance binary.

namespace wanderkit::testing {

namespace fs = std::filesystem;

inline Quat RandomRotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Quat q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q;
}

inline Vec3 RandomVec(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng), u(rng)};
}

inline Trajectory RandomTrajectory(std::mt19937_64& rng, std::size_t n, double extent = 5.0) {
  Trajectory t;
  for (std::size_t i = 0; i < n; ++i) {
    t.poses.emplace_back(RandomRotation(rng), RandomVec(rng, -extent, extent),
                         static_cast<double>(i));
  }
  return t;
}

inline Similarity3 RandomSim3(std::mt19937_64& rng, bool with_scale = true) {
  std::uniform_real_distribution<double> s(0.5, 2.0);
  Similarity3 x;
  x.scale = with_scale ? s(rng) : 1.0;
  x.rotation = RandomRotation(rng).toRotationMatrix();
  x.translation = RandomVec(rng, -5.0, 5.0);
  return x;
}

// Noisy copy of a trajectory: small rotation and translation perturbations.
inline Trajectory Perturb(const Trajectory& t, std::mt19937_64& rng, double sigma_t,
                          double sigma_r) {
  std::normal_distribution<double> n(0.0, 1.0);
  Trajectory out = t;
  for (auto& p : out.poses) {
    const Vec3 axis(n(rng), n(rng), n(rng));
    const Quat dq(Eigen::AngleAxisd(sigma_r * n(rng), axis.normalized()));
    p.rotation = (p.rotation * dq).normalized();
    p.translation += sigma_t * Vec3(n(rng), n(rng), n(rng));
  }
  return out;
}

// Walkable floor made of unit-ish square cells; cell (i, j) is present when
// mask(i, j) is true. Shared corners are shared vertices and every triangle
// faces +z.
template <typename Mask>
TriangleMesh GridFloor(int nx, int ny, double cell, double z, Mask mask) {
  TriangleMesh m;
  std::map<std::pair<int, int>, std::uint32_t> ids;
  auto vid = [&](int i, int j) {
    auto [it, inserted] = ids.try_emplace({i, j}, static_cast<std::uint32_t>(m.vertices.size()));
    if (inserted) m.vertices.emplace_back(i * cell, j * cell, z);
    return it->second;
  };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!mask(i, j)) continue;
      const auto a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    }
  }
  return m;
}

inline TriangleMesh FlatFloor(double size, int cells) {
  return GridFloor(cells, cells, size / cells, 0.0, [](int, int) { return true; });
}

// 10 x 10 m U-shaped corridor of 1 m cells: two 2 m wide arms along y joined
// by a 2 m wide strip at y in [0, 2].
inline TriangleMesh UCorridor() {
  return GridFloor(10, 10, 1.0, 0.0, [](int i, int j) { return i < 2 || i >= 8 || j < 2; });
}

// Axis-aligned box as a closed triangle mesh.
inline TriangleMesh Box(const Vec3& lo, const Vec3& hi) {
  TriangleMesh m;
  for (int c = 0; c < 8; ++c) {
    m.vertices.emplace_back(c & 1 ? hi.x() : lo.x(), c & 2 ? hi.y() : lo.y(),
                            c & 4 ? hi.z() : lo.z());
  }
  const std::uint32_t quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                                     {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  for (const auto& q : quads) {
    m.triangles.push_back({q[0], q[1], q[2]});
    m.triangles.push_back({q[0], q[2], q[3]});
  }
  return m;
}

// Strip of `faces` triangles (faces must be even) starting at x0.
inline TriangleMesh Strip(std::size_t faces, double x0) {
  const int cells = static_cast<int>(faces / 2);
  TriangleMesh m = GridFloor(cells, 1, 1.0, 0.0, [](int, int) { return true; });
  for (auto& v : m.vertices) v.x() += x0;
  return m;
}

inline TriangleMesh Concat(const TriangleMesh& a, const TriangleMesh& b) {
  TriangleMesh m = a;
  const auto off = static_cast<std::uint32_t>(a.vertices.size());
  m.vertices.insert(m.vertices.end(), b.vertices.begin(), b.vertices.end());
  for (auto t : b.triangles) m.triangles.push_back({t[0] + off, t[1] + off, t[2] + off});
  return m;
}

// Synthetic room: a floor plane at z = 0 and four walls 2.5 m high, sampled
// on a regular lattice, plus a camera path walking a loop at 1.5 m.
struct Room {
  PointCloud cloud;
  Trajectory cameras;
};

inline Room SyntheticRoom(double size = 10.0, double spacing = 0.025) {
  Room room;
  const int n = static_cast<int>(std::lround(size / spacing));
  const int nz = static_cast<int>(std::lround(2.5 / spacing));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) room.cloud.points.emplace_back(i * spacing, j * spacing, 0.0);
  }
  for (int k = 1; k <= nz; ++k) {
    for (int i = 0; i <= n; ++i) {
      const double s = i * spacing, z = k * spacing;
      room.cloud.points.emplace_back(s, 0.0, z);
      room.cloud.points.emplace_back(s, size, z);
      room.cloud.points.emplace_back(0.0, s, z);
      room.cloud.points.emplace_back(size, s, z);
    }
  }
  const double inset = 2.0;
  const int steps = 40;
  for (int s = 0; s < steps; ++s) {
    const double a = 2.0 * kPi * s / steps;
    const Vec3 p(size / 2 + (size / 2 - inset) * std::cos(a),
                 size / 2 + (size / 2 - inset) * std::sin(a), 1.5);
    room.cameras.poses.emplace_back(Quat(Eigen::AngleAxisd(a, Vec3::UnitZ())), p,
                                    static_cast<double>(s));
  }
  return room;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = fs::temp_directory_path() / ("wanderkit_test_" + std::to_string(rng()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

// Edges of a triangle mesh with the number of faces using each.
inline std::map<std::pair<std::uint32_t, std::uint32_t>, int> EdgeUse(const TriangleMesh& m) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> use;
  for (const auto& t : m.triangles) {
    for (int e = 0; e < 3; ++e) {
      auto a = t[e], b = t[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      ++use[{a, b}];
    }
  }
  return use;
}

// Solid ball of `radius` voxels centred in an n^3 grid.
inline OccupancyGrid BallGrid(int n, double radius) {
  OccupancyGrid g = OccupancyGrid::Empty(Vec3::Zero(), 1.0, {n, n, n});
  const double c = n / 2.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec3 p(i + 0.5 - c, j + 0.5 - c, k + 0.5 - c);
        g.SetOccupied(i, j, k, p.norm() <= radius);
      }
  return g;
}

}  // namespace wanderkit::testing
