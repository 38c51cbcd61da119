#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "support.hpp"
#include "wanderkit/navmesh.hpp"

// Navigation fixtures and the visibility-graph oracle for the U corridor.

namespace wanderkit::testing {

inline PathOptions NoRadius() {
  PathOptions o;
  o.agent_radius = 0.0;
  return o;
}

// True when segment ab stays out of the gap between the arms, the box
// x in (2, 8), y > 2 (shrunk by a hair so grazing the corners is allowed).
inline bool Visible(const Vec2& a, const Vec2& b) {
  constexpr double e = 1e-9;
  const Vec2 d = b - a;
  double t0 = 0.0, t1 = 1.0;
  auto clip = [&](double p, double q) {  // keep p * t <= q
    if (p == 0.0) return q >= 0.0;
    const double t = q / p;
    if (p < 0.0) t0 = std::max(t0, t);
    else t1 = std::min(t1, t);
    return t0 <= t1;
  };
  const bool enters = clip(-d.x(), a.x() - (2 + e)) && clip(d.x(), (8 - e) - a.x()) &&
                      clip(-d.y(), a.y() - (2 + e));
  return !enters;
}

// Dijkstra over the visibility graph of start, goal and the two reflex
// corners of the U.
inline double UOracle(const Vec2& start, const Vec2& goal) {
  const std::vector<Vec2> nodes = {start, goal, Vec2(2, 2), Vec2(8, 2)};
  std::vector<double> dist(nodes.size(), std::numeric_limits<double>::infinity());
  std::vector<bool> done(nodes.size(), false);
  dist[0] = 0.0;
  for (std::size_t round = 0; round < nodes.size(); ++round) {
    std::size_t u = nodes.size();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!done[i] && (u == nodes.size() || dist[i] < dist[u])) u = i;
    }
    done[u] = true;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      if (!done[v] && Visible(nodes[u], nodes[v])) {
        dist[v] = std::min(dist[v], dist[u] + (nodes[u] - nodes[v]).norm());
      }
    }
  }
  return dist[1];
}

inline Vec3 RandomSurfacePoint(const NavMesh& nav, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> tri(0, nav.num_triangles() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Triangle& t = nav.triangles()[tri(rng)];
  double a = u(rng), b = u(rng);
  if (a + b > 1.0) {
    a = 1.0 - a;
    b = 1.0 - b;
  }
  const auto& v = nav.vertices();
  return v[t[0]] + a * (v[t[1]] - v[t[0]]) + b * (v[t[2]] - v[t[0]]);
}

// 10 x 10 floor of 1 m cells with four square pillars.
inline TriangleMesh PillarFloor() {
  return GridFloor(10, 10, 1.0, 0.0, [](int i, int j) {
    const bool pillar = (i == 3 || i == 6) && (j == 3 || j == 6);
    return !pillar;
  });
}


}  // namespace wanderkit::testing
