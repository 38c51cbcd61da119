#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <tuple>
#include <unordered_map>

#include "wanderkit/error.hpp"
#include "wanderkit/navmesh.hpp"

namespace wanderkit {
namespace {

constexpr std::uint32_t kNoVertex = ~0u;
constexpr int kMaxRefinements = 256;

double Cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

int LocalEdge(const Triangle& tri, std::uint32_t a, std::uint32_t b) {
  for (int k = 0; k < 3; ++k) {
    const std::uint32_t p = tri[k];
    const std::uint32_t q = tri[(k + 1) % 3];
    if ((p == a && q == b) || (p == b && q == a)) return k;
  }
  return -1;
}

// A* over (triangle, entry edge) states positioned at edge midpoints.
// Returns the corridor of triangles from start to goal.
std::vector<std::uint32_t> FindCorridor(const NavMesh& nav, const SurfacePoint& s,
                                        const SurfacePoint& g) {
  const auto& verts = nav.vertices();
  const auto& tris = nav.triangles();
  auto state_id = [](std::uint32_t tri, int edge) { return tri * 4u + static_cast<std::uint32_t>(edge); };

  struct Node {
    double cost;
    std::uint32_t parent;
    Vec3 pos;
    bool closed;
  };
  std::unordered_map<std::uint32_t, Node> nodes;
  using Entry = std::tuple<double, double, std::uint32_t>;  // f, g, state
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  const std::uint32_t start = state_id(s.triangle, 3);
  nodes[start] = {0.0, start, s.point, false};
  open.emplace((g.point - s.point).norm(), 0.0, start);
  double goal_cost = std::numeric_limits<double>::infinity();
  std::uint32_t goal_parent = start;

  while (!open.empty()) {
    const auto [f, cost, id] = open.top();
    open.pop();
    if (f >= goal_cost) break;
    Node& node = nodes[id];
    if (node.closed || cost > node.cost) continue;
    node.closed = true;
    const std::uint32_t tri = id / 4;
    const int entry = static_cast<int>(id % 4);
    const Vec3 pos = node.pos;

    if (tri == g.triangle) {
      const double c = cost + (g.point - pos).norm();
      if (c < goal_cost) {
        goal_cost = c;
        goal_parent = id;
      }
    }
    for (const NavMesh::Link& link : nav.adjacency()[tri]) {
      const int k = LocalEdge(tris[tri], link.v0, link.v1);
      if (k == entry) continue;
      const int k_in = LocalEdge(tris[link.neighbor], link.v0, link.v1);
      const std::uint32_t next = state_id(link.neighbor, k_in);
      const Vec3 mid = 0.5 * (verts[link.v0] + verts[link.v1]);
      const double c = cost + (mid - pos).norm();
      auto it = nodes.find(next);
      if (it != nodes.end() && (it->second.closed || it->second.cost <= c)) continue;
      nodes[next] = {c, id, mid, false};
      open.emplace(c + (g.point - mid).norm(), c, next);
    }
  }
  if (!std::isfinite(goal_cost)) {
    Fail(ErrorCode::kUnreachable, "goal not reachable over the navmesh");
  }

  std::vector<std::uint32_t> corridor;
  for (std::uint32_t id = goal_parent;; id = nodes[id].parent) {
    corridor.push_back(id / 4);
    if (id == start) break;
  }
  std::reverse(corridor.begin(), corridor.end());
  return corridor;
}

struct Portal {
  Vec3 left3, right3;  // pulled inward at boundary vertices
  Vec2 left, right;
  std::uint32_t left_vertex = kNoVertex;
  std::uint32_t right_vertex = kNoVertex;
};

struct Apex {
  std::size_t portal;
  Vec3 point3;
  Vec2 point;
  std::uint32_t vertex;  // kNoVertex for start/goal or pulled-in points
};

struct PulledPath {
  std::vector<Apex> apexes;
  std::vector<Portal> portals;
  double length = 0.0;
};

std::vector<Portal> BuildPortals(const NavMesh& nav, const std::vector<std::uint32_t>& corridor,
                                 const SurfacePoint& s, const SurfacePoint& g, double radius) {
  const auto& verts = nav.vertices();
  const auto& tris = nav.triangles();
  std::vector<Portal> portals;
  portals.reserve(corridor.size() + 1);

  auto endpoint = [&](const Vec3& p) {
    Portal portal;
    portal.left3 = portal.right3 = p;
    portal.left = portal.right = nav.Planar(p);
    return portal;
  };
  portals.push_back(endpoint(s.point));

  for (std::size_t i = 1; i < corridor.size(); ++i) {
    const Triangle& a = tris[corridor[i - 1]];
    const Triangle& b = tris[corridor[i]];
    std::uint32_t shared[2];
    int n_shared = 0;
    std::uint32_t apex = a[0];
    for (std::uint32_t v : a) {
      if (std::find(b.begin(), b.end(), v) != b.end()) {
        if (n_shared < 2) shared[n_shared] = v;
        ++n_shared;
      } else {
        apex = v;
      }
    }
    if (n_shared != 2) Fail(ErrorCode::kUnreachable, "corridor triangles are not edge-adjacent");

    const Vec2 p0 = nav.Planar(verts[shared[0]]);
    const Vec2 p1 = nav.Planar(verts[shared[1]]);
    const Vec2 mid = 0.5 * (p0 + p1);
    const Vec2 forward = mid - nav.Planar(verts[apex]);
    std::uint32_t lv = shared[0], rv = shared[1];
    if (Cross2(forward, p0 - mid) < 0.0) std::swap(lv, rv);

    Portal portal;
    portal.left_vertex = lv;
    portal.right_vertex = rv;
    const double len = (verts[rv] - verts[lv]).norm();
    const double pull = std::min(radius, 0.5 * len);
    double t_left = 0.0, t_right = 1.0;
    if (pull > 0.0 && len > 0.0) {
      if (nav.IsCornerVertex(lv)) t_left = pull / len;
      if (nav.IsCornerVertex(rv)) t_right = 1.0 - pull / len;
    }
    portal.left3 = verts[lv] + t_left * (verts[rv] - verts[lv]);
    portal.right3 = verts[lv] + t_right * (verts[rv] - verts[lv]);
    if (t_left != 0.0) portal.left_vertex = kNoVertex;
    if (t_right != 1.0) portal.right_vertex = kNoVertex;
    portal.left = nav.Planar(portal.left3);
    portal.right = nav.Planar(portal.right3);
    portals.push_back(portal);
  }
  portals.push_back(endpoint(g.point));
  return portals;
}

// Simple stupid funnel algorithm in the plane orthogonal to `up`. Left is
// counter-clockwise of right when looking along the corridor.
std::vector<Apex> Funnel(const std::vector<Portal>& portals) {
  std::vector<Apex> apexes;
  Apex apex{0, portals[0].left3, portals[0].left, kNoVertex};
  apexes.push_back(apex);
  Vec2 left = apex.point, right = apex.point;
  std::size_t left_index = 0, right_index = 0;

  for (std::size_t i = 1; i < portals.size(); ++i) {
    const Portal& p = portals[i];
    const Vec2& a = apex.point;

    if (Cross2(right - a, p.right - a) >= 0.0) {
      if (right == a || Cross2(left - a, p.right - a) < 0.0) {
        right = p.right;
        right_index = i;
      } else {
        const Portal& lp = portals[left_index];
        apex = Apex{left_index, lp.left3, lp.left, lp.left_vertex};
        apexes.push_back(apex);
        left = right = apex.point;
        i = left_index;
        right_index = left_index;
        continue;
      }
    }
    if (Cross2(left - a, p.left - a) <= 0.0) {
      if (left == a || Cross2(right - a, p.left - a) > 0.0) {
        left = p.left;
        left_index = i;
      } else {
        const Portal& rp = portals[right_index];
        apex = Apex{right_index, rp.right3, rp.right, rp.right_vertex};
        apexes.push_back(apex);
        left = right = apex.point;
        i = right_index;
        left_index = right_index;
        continue;
      }
    }
  }
  const Portal& last = portals.back();
  if (apexes.back().portal != portals.size() - 1) {
    apexes.push_back(Apex{portals.size() - 1, last.left3, last.left, kNoVertex});
  }
  return apexes;
}

// Apex polyline expanded with every portal crossing, lifted onto the edges.
std::vector<Vec3> Densify(const std::vector<Apex>& apexes, const std::vector<Portal>& portals) {
  std::vector<Vec3> points;
  auto push = [&](const Vec3& p) {
    if (points.empty() || (points.back() - p).squaredNorm() > 1e-24) points.push_back(p);
  };
  push(apexes.front().point3);
  for (std::size_t k = 1; k < apexes.size(); ++k) {
    const Apex& from = apexes[k - 1];
    const Apex& to = apexes[k];
    const Vec2 dir = to.point - from.point;
    for (std::size_t i = from.portal + 1; i < to.portal; ++i) {
      const Portal& portal = portals[i];
      // Intersect the apex segment with the portal in the plane; lift the
      // crossing onto the 3D edge.
      const double denom = Cross2(portal.right - portal.left, dir);
      if (std::abs(denom) < 1e-15) continue;
      const double t = std::clamp(Cross2(from.point - portal.left, dir) / denom, 0.0, 1.0);
      push(portal.left3 + t * (portal.right3 - portal.left3));
    }
    push(to.point3);
  }
  return points;
}

double PolylineLength(const std::vector<Vec3>& points) {
  double len = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) len += (points[i] - points[i - 1]).norm();
  return len;
}

PulledPath Pull(const NavMesh& nav, const std::vector<std::uint32_t>& corridor,
                const SurfacePoint& s, const SurfacePoint& g, double radius) {
  PulledPath out;
  out.portals = BuildPortals(nav, corridor, s, g, radius);
  out.apexes = Funnel(out.portals);
  double len = 0.0;
  for (std::size_t k = 1; k < out.apexes.size(); ++k) {
    len += (out.apexes[k].point3 - out.apexes[k - 1].point3).norm();
  }
  out.length = len;
  return out;
}

// Re-routes the corridor around an interior vertex the taut path wraps;
// returns false when no such vertex can be improved.
bool RerouteAroundVertex(const NavMesh& nav, std::vector<std::uint32_t>& corridor,
                         std::uint32_t v, std::size_t portal_index) {
  const auto& tris = nav.triangles();
  auto has_v = [&](std::uint32_t t) {
    return std::find(tris[t].begin(), tris[t].end(), v) != tris[t].end();
  };
  // Portal i sits between corridor[i-1] and corridor[i].
  if (portal_index == 0 || portal_index >= corridor.size()) return false;
  std::size_t a = portal_index - 1;
  std::size_t b = portal_index;
  if (!has_v(corridor[a]) || !has_v(corridor[b])) return false;
  while (a > 0 && has_v(corridor[a - 1])) --a;
  while (b + 1 < corridor.size() && has_v(corridor[b + 1])) ++b;

  std::vector<std::uint32_t> arc{corridor[a]};
  std::uint32_t prev = corridor[a + 1];
  std::uint32_t cur = corridor[a];
  const std::size_t limit = nav.TrianglesAtVertex(v).size() + 1;
  while (cur != corridor[b]) {
    std::uint32_t next = kNoVertex;
    for (const NavMesh::Link& link : nav.adjacency()[cur]) {
      if ((link.v0 == v || link.v1 == v) && link.neighbor != prev) {
        next = link.neighbor;
        break;
      }
    }
    if (next == kNoVertex || arc.size() > limit) return false;
    prev = cur;
    cur = next;
    arc.push_back(cur);
  }
  std::vector<std::uint32_t> rerouted(corridor.begin(), corridor.begin() + static_cast<std::ptrdiff_t>(a));
  rerouted.insert(rerouted.end(), arc.begin(), arc.end());
  rerouted.insert(rerouted.end(), corridor.begin() + static_cast<std::ptrdiff_t>(b) + 1, corridor.end());
  corridor = std::move(rerouted);
  return true;
}

// A taut path never needs to bend around a vertex interior to the navmesh.
// When the A* corridor forces such a bend, swing the corridor to the other
// side of that vertex and pull again.
PulledPath PullWithRefinement(const NavMesh& nav, std::vector<std::uint32_t> corridor,
                              const SurfacePoint& s, const SurfacePoint& g, double radius) {
  PulledPath best = Pull(nav, corridor, s, g, radius);
  std::set<std::uint32_t> exhausted;
  for (int iter = 0; iter < kMaxRefinements; ++iter) {
    bool improved = false;
    for (std::size_t k = 1; k + 1 < best.apexes.size(); ++k) {
      const Apex& apex = best.apexes[k];
      if (apex.vertex == kNoVertex || nav.IsBoundaryVertex(apex.vertex)) continue;
      if (exhausted.count(apex.vertex)) continue;
      const Vec2 in = apex.point - best.apexes[k - 1].point;
      const Vec2 out = best.apexes[k + 1].point - apex.point;
      if (std::abs(Cross2(in, out)) <= 1e-12 * in.norm() * out.norm()) continue;

      std::vector<std::uint32_t> candidate = corridor;
      if (!RerouteAroundVertex(nav, candidate, apex.vertex, apex.portal)) {
        exhausted.insert(apex.vertex);
        continue;
      }
      PulledPath pulled = Pull(nav, candidate, s, g, radius);
      if (pulled.length < best.length - 1e-12) {
        corridor = std::move(candidate);
        best = std::move(pulled);
        improved = true;
        break;
      }
      exhausted.insert(apex.vertex);
    }
    if (!improved) break;
  }
  return best;
}

// A location on the navmesh: either inside `triangle` or at `vertex`.
struct Place {
  Vec3 point;
  std::uint32_t triangle = kNoVertex;
  std::uint32_t vertex = kNoVertex;
};

struct Sight {
  std::vector<std::uint32_t> triangles;  // edge-adjacent
  double length = 0.0;
};

bool HasVertex(const Triangle& t, std::uint32_t v) {
  return t[0] == v || t[1] == v || t[2] == v;
}

// Shortest chain of triangles around vertex v from `from` to `to`, moving
// across edges incident to v. Excludes `from`, includes `to`.
bool FanChain(const NavMesh& nav, std::uint32_t v, std::uint32_t from, std::uint32_t to,
              std::vector<std::uint32_t>& out) {
  if (from == to) return true;
  std::unordered_map<std::uint32_t, std::uint32_t> parent{{from, from}};
  std::queue<std::uint32_t> queue;
  queue.push(from);
  while (!queue.empty()) {
    const std::uint32_t t = queue.front();
    queue.pop();
    if (t == to) break;
    for (const NavMesh::Link& link : nav.adjacency()[t]) {
      if (link.v0 != v && link.v1 != v) continue;
      if (parent.emplace(link.neighbor, t).second) queue.push(link.neighbor);
    }
  }
  if (!parent.count(to)) return false;
  std::vector<std::uint32_t> chain;
  for (std::uint32_t t = to; t != from; t = parent[t]) chain.push_back(t);
  out.insert(out.end(), chain.rbegin(), chain.rend());
  return true;
}

// Walks the straight planar segment from `a` to `b` across the navmesh.
// Fails when the segment leaves the walkable surface. Passing exactly
// through vertices, and running along edges, is allowed.
std::optional<Sight> WalkSegment(const NavMesh& nav, const Place& a, const Place& b) {
  const auto& verts = nav.vertices();
  const auto& tris = nav.triangles();
  Sight sight;
  const Vec2 s = nav.Planar(a.point);
  const Vec2 d = nav.Planar(b.point) - s;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) {
    if ((a.point - b.point).norm() > 1e-9) return std::nullopt;
    if (a.triangle != kNoVertex) sight.triangles.push_back(a.triangle);
    return sight;
  }
  const double scale = std::sqrt(len2);
  auto side = [&](const Vec2& p) {
    const double o = Cross2(d, p - s);
    const double tol = 1e-12 * scale * std::max(1.0, (p - s).norm());
    return o > tol ? 1 : (o < -tol ? -1 : 0);
  };
  auto holds_target = [&](std::uint32_t t) {
    if (b.vertex != kNoVertex) return HasVertex(tris[t], b.vertex);
    return t == b.triangle;
  };

  std::vector<Vec3> points{a.point};
  std::uint32_t tri = a.triangle;
  std::uint32_t vertex = a.vertex;
  double lambda = 0.0;
  if (vertex == kNoVertex) sight.triangles.push_back(tri);

  const std::size_t guard = 4 * tris.size() + 16;
  for (std::size_t step = 0;; ++step) {
    if (step > guard) return std::nullopt;
    if (vertex != kNoVertex) {
      if (vertex == b.vertex) break;
      // Pick the triangle whose corner at `vertex` contains the direction.
      const Vec2 pv = nav.Planar(verts[vertex]);
      std::uint32_t next = kNoVertex;
      for (std::uint32_t t : nav.TrianglesAtVertex(vertex)) {
        Vec2 e[2];
        int n = 0;
        for (std::uint32_t u : tris[t]) {
          if (u != vertex && n < 2) e[n++] = nav.Planar(verts[u]) - pv;
        }
        const double area = Cross2(e[0], e[1]);
        if (area == 0.0) continue;
        if (area < 0.0) std::swap(e[0], e[1]);
        const double tol = 1e-12 * scale * std::max(e[0].norm(), e[1].norm());
        if (Cross2(e[0], d) >= -tol && Cross2(d, e[1]) >= -tol) {
          if (t == tri) {
            next = t;
            break;
          }
          if (next == kNoVertex) next = t;
        }
      }
      if (next == kNoVertex) return std::nullopt;
      if (tri == kNoVertex) {
        sight.triangles.push_back(next);
      } else if (next != tri) {
        if (!FanChain(nav, vertex, tri, next, sight.triangles)) return std::nullopt;
      }
      tri = next;
      vertex = kNoVertex;
    }

    if (holds_target(tri)) break;

    // Leave the triangle where the segment's parameter is largest.
    const Triangle& t = tris[tri];
    Vec2 p[3];
    int o[3];
    for (int k = 0; k < 3; ++k) {
      p[k] = nav.Planar(verts[t[k]]);
      o[k] = side(p[k]);
    }
    double best = -std::numeric_limits<double>::infinity();
    int best_vertex = -1, best_edge = -1;
    double best_mu = 0.0;
    for (int k = 0; k < 3; ++k) {
      if (o[k] == 0) {
        const double l = d.dot(p[k] - s) / len2;
        if (l > best) {
          best = l;
          best_vertex = k;
          best_edge = -1;
        }
      }
      const int k1 = (k + 1) % 3;
      if (o[k] * o[k1] == -1) {
        const Vec2 edge = p[k1] - p[k];
        const double denom = Cross2(d, edge);
        const double l = Cross2(p[k] - s, edge) / denom;
        if (l > best) {
          best = l;
          best_edge = k;
          best_vertex = -1;
          best_mu = Cross2(p[k] - s, d) / denom;
        }
      }
    }
    if (best >= 1.0) {
      // The target lies inside this triangle in the plane; accept it only
      // on the same layer.
      const Vec3 c = ClosestPointOnTriangle(b.point, verts[t[0]], verts[t[1]], verts[t[2]]);
      if ((c - b.point).norm() > 1e-6) return std::nullopt;
      break;
    }
    if (!(best > lambda + 1e-12)) return std::nullopt;
    lambda = best;
    if (best_vertex >= 0) {
      vertex = t[best_vertex];
      points.push_back(verts[vertex]);
      continue;
    }
    const std::uint32_t ea = t[best_edge], eb = t[(best_edge + 1) % 3];
    const std::uint32_t opposite = t[(best_edge + 2) % 3];
    const double here = Cross2(p[(best_edge + 1) % 3] - p[best_edge],
                               nav.Planar(verts[opposite]) - p[best_edge]);
    std::uint32_t next = kNoVertex;
    for (const NavMesh::Link& link : nav.adjacency()[tri]) {
      if (!((link.v0 == ea && link.v1 == eb) || (link.v0 == eb && link.v1 == ea))) continue;
      const Triangle& nt = tris[link.neighbor];
      std::uint32_t far = nt[0];
      for (std::uint32_t u : nt) {
        if (u != ea && u != eb) far = u;
      }
      const double there = Cross2(p[(best_edge + 1) % 3] - p[best_edge],
                                  nav.Planar(verts[far]) - p[best_edge]);
      if (here * there < 0.0) {
        next = link.neighbor;
        break;
      }
    }
    if (next == kNoVertex) return std::nullopt;
    points.push_back(verts[ea] + std::clamp(best_mu, 0.0, 1.0) * (verts[eb] - verts[ea]));
    sight.triangles.push_back(next);
    tri = next;
  }
  points.push_back(b.point);
  sight.length = PolylineLength(points);
  return sight;
}

// A* over start, goal and the corner vertices with straight-line visibility
// edges. Returns the concatenated triangle corridor, or nullopt if the walk
// finds no route (numerical corner cases; the caller falls back).
std::optional<std::vector<std::uint32_t>> VisibilityCorridor(const NavMesh& nav,
                                                             const SurfacePoint& s,
                                                             const SurfacePoint& g) {
  std::vector<Place> nodes;
  nodes.push_back({s.point, s.triangle, kNoVertex});
  nodes.push_back({g.point, g.triangle, kNoVertex});
  for (std::uint32_t v : nav.corner_vertices()) nodes.push_back({nav.vertices()[v], kNoVertex, v});
  const std::size_t n = nodes.size();

  std::vector<double> cost(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> parent(n, n);
  std::vector<Sight> via(n);
  std::vector<bool> closed(n, false);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  cost[0] = 0.0;
  open.emplace((g.point - s.point).norm(), 0);
  while (!open.empty()) {
    const std::size_t u = open.top().second;
    open.pop();
    if (closed[u]) continue;
    closed[u] = true;
    if (u == 1) break;
    for (std::size_t w = 1; w < n; ++w) {
      if (closed[w]) continue;
      const double lower = cost[u] + (nodes[w].point - nodes[u].point).norm();
      if (lower >= cost[w]) continue;
      std::optional<Sight> sight = WalkSegment(nav, nodes[u], nodes[w]);
      if (!sight) continue;
      const double c = cost[u] + sight->length;
      if (c < cost[w]) {
        cost[w] = c;
        parent[w] = u;
        via[w] = std::move(*sight);
        open.emplace(c + (g.point - nodes[w].point).norm(), w);
      }
    }
  }
  if (!closed[1]) return std::nullopt;

  std::vector<std::size_t> chain;
  for (std::size_t u = 1; u != 0; u = parent[u]) chain.push_back(u);
  std::reverse(chain.begin(), chain.end());

  std::vector<std::uint32_t> corridor;
  for (std::size_t u : chain) {
    const Sight& sight = via[u];
    if (sight.triangles.empty()) continue;
    if (!corridor.empty() && corridor.back() != sight.triangles.front()) {
      const std::uint32_t v = nodes[parent[u]].vertex;
      if (v == kNoVertex) return std::nullopt;
      const std::uint32_t last = corridor.back();
      corridor.pop_back();
      std::vector<std::uint32_t> fan{last};
      if (!FanChain(nav, v, last, sight.triangles.front(), fan)) return std::nullopt;
      fan.pop_back();
      corridor.insert(corridor.end(), fan.begin(), fan.end());
    }
    for (std::uint32_t t : sight.triangles) {
      if (corridor.empty() || corridor.back() != t) corridor.push_back(t);
    }
  }
  // Drop loops so the corridor visits each triangle once.
  std::vector<std::uint32_t> simple;
  std::unordered_map<std::uint32_t, std::size_t> seen;
  for (std::uint32_t t : corridor) {
    auto it = seen.find(t);
    if (it != seen.end()) {
      for (std::size_t k = it->second + 1; k < simple.size(); ++k) seen.erase(simple[k]);
      simple.resize(it->second + 1);
      continue;
    }
    seen[t] = simple.size();
    simple.push_back(t);
  }
  if (simple.empty() || simple.front() != s.triangle) return std::nullopt;
  return simple;
}

bool Precedes(const SurfacePoint& a, const SurfacePoint& b) {
  return std::make_tuple(a.triangle, a.point.x(), a.point.y(), a.point.z()) <
         std::make_tuple(b.triangle, b.point.x(), b.point.y(), b.point.z());
}

SurfacePoint SnapEndpoint(const NavMesh& nav, const Vec3& p, double cap, const char* which) {
  SurfacePoint s = nav.Snap(p);
  if (s.distance > cap) {
    Fail(ErrorCode::kInvalidEndpoint, std::string(which) + " is " + std::to_string(s.distance) +
                                          " m from the navmesh (cap " + std::to_string(cap) + " m)");
  }
  return s;
}

Path PathBetween(const NavMesh& nav, const SurfacePoint& s, const SurfacePoint& g,
                 const PathOptions& options) {
  if (Precedes(g, s)) {
    Path reversed = PathBetween(nav, g, s, options);
    std::reverse(reversed.waypoints.begin(), reversed.waypoints.end());
    return reversed;
  }
  if (nav.region(s.triangle) != nav.region(g.triangle)) {
    Fail(ErrorCode::kUnreachable, "start and goal lie in different navmesh regions");
  }
  Path path;
  if (s.point == g.point) {
    path.waypoints = {s.point};
    return path;
  }
  if (s.triangle == g.triangle) {
    path.waypoints = {s.point, g.point};
    path.length = (g.point - s.point).norm();
    return path;
  }
  const std::optional<std::vector<std::uint32_t>> visible = VisibilityCorridor(nav, s, g);
  const PulledPath pulled =
      visible ? Pull(nav, *visible, s, g, options.agent_radius)
              : PullWithRefinement(nav, FindCorridor(nav, s, g), s, g, options.agent_radius);
  path.waypoints = Densify(pulled.apexes, pulled.portals);
  path.length = PolylineLength(path.waypoints);
  return path;
}

}  // namespace

Path ShortestPath(const NavMesh& navmesh, const Vec3& start, const Vec3& goal,
                  const PathOptions& options) {
  Require(options.agent_radius >= 0.0, "agent_radius must be non-negative");
  const SurfacePoint s = SnapEndpoint(navmesh, start, options.snap_cap, "start");
  const SurfacePoint g = SnapEndpoint(navmesh, goal, options.snap_cap, "goal");
  return PathBetween(navmesh, s, g, options);
}

double GeodesicDistance(const NavMesh& navmesh, const Vec3& a, const Vec3& b,
                        const PathOptions& options) {
  return ShortestPath(navmesh, a, b, options).length;
}

std::pair<SurfacePoint, SurfacePoint> SampleEndpoints(const NavMesh& navmesh,
                                                      const Trajectory& cameras,
                                                      const EndpointSampling& sampling,
                                                      std::uint64_t seed,
                                                      const PathOptions& options) {
  Require(!cameras.empty(), "endpoint sampling needs camera poses");
  Require(sampling.vicinity >= 0.0, "vicinity must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, cameras.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto perturb = [&](const Vec3& c) {
    const double r = sampling.vicinity * std::sqrt(unit(rng));
    const double theta = 2.0 * kPi * unit(rng);
    return Vec3(c + r * navmesh.PlanarDirection(theta));
  };

  for (std::size_t attempt = 0; attempt < sampling.max_attempts; ++attempt) {
    const Vec3 a = perturb(cameras.poses[pick(rng)].translation);
    const Vec3 b = perturb(cameras.poses[pick(rng)].translation);
    try {
      const SurfacePoint s = SnapEndpoint(navmesh, a, options.snap_cap, "start");
      const SurfacePoint g = SnapEndpoint(navmesh, b, options.snap_cap, "goal");
      const Path path = PathBetween(navmesh, s, g, options);
      if (path.length >= sampling.min_geodesic) return {s, g};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnreachable && e.code() != ErrorCode::kInvalidEndpoint) throw;
    }
  }
  Fail(ErrorCode::kSamplingFailure, "no start/goal pair found within " +
                                        std::to_string(sampling.max_attempts) + " attempts");
}

}  // namespace wanderkit
