#include "wanderkit/kdtree.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace wanderkit {
namespace {

bool Closer(const KdTree::Neighbor& a, const KdTree::Neighbor& b) {
  return a.squared_distance < b.squared_distance ||
         (a.squared_distance == b.squared_distance && a.index < b.index);
}

double BoxDistanceSquared(const Vec3& q, const Vec3& lo, const Vec3& hi) {
  double d = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double below = lo[a] - q[a];
    const double above = q[a] - hi[a];
    const double gap = std::max({below, above, 0.0});
    d += gap * gap;
  }
  return d;
}

}  // namespace

KdTree::KdTree(std::span<const Vec3> points, std::size_t leaf_size)
    : points_(points), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / leaf_size_ + 1);
    Build(0, static_cast<std::uint32_t>(points_.size()));
  }
}

std::int32_t KdTree::Build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({});
  Vec3 lo = points_[order_[begin]];
  Vec3 hi = lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  Node node;
  node.begin = begin;
  node.end = end;
  node.lo = lo;
  node.hi = hi;
  if (end - begin > leaf_size_) {
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       return points_[a][axis] < points_[b][axis] ||
                              (points_[a][axis] == points_[b][axis] && a < b);
                     });
    node.axis = axis;
    node.split = points_[order_[mid]][axis];
    node.left = Build(begin, mid);
    node.right = Build(mid, end);
  }
  nodes_[id] = node;
  return id;
}

std::vector<KdTree::Neighbor> KdTree::Nearest(const Vec3& query, std::size_t k,
                                              std::size_t exclude) const {
  std::vector<Neighbor> best;  // max-heap under Closer
  if (k == 0 || nodes_.empty()) return best;
  best.reserve(k + 1);

  auto worst = [&]() { return best.front().squared_distance; };
  auto consider = [&](std::uint32_t idx) {
    if (idx == exclude) return;
    const Neighbor cand{idx, (points_[idx] - query).squaredNorm()};
    if (best.size() < k) {
      best.push_back(cand);
      std::push_heap(best.begin(), best.end(), Closer);
    } else if (Closer(cand, best.front())) {
      std::pop_heap(best.begin(), best.end(), Closer);
      best.back() = cand;
      std::push_heap(best.begin(), best.end(), Closer);
    }
  };

  // Best-first traversal keyed on box distance.
  using Entry = std::pair<double, std::int32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  frontier.emplace(BoxDistanceSquared(query, nodes_[0].lo, nodes_[0].hi), 0);
  while (!frontier.empty()) {
    const auto [dist, id] = frontier.top();
    frontier.pop();
    // Equal distances may still win on index, so only strictly farther boxes
    // are pruned.
    if (best.size() == k && dist > worst()) break;
    const Node& node = nodes_[id];
    if (node.left < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) consider(order_[i]);
      continue;
    }
    for (std::int32_t child : {node.left, node.right}) {
      const Node& c = nodes_[child];
      frontier.emplace(BoxDistanceSquared(query, c.lo, c.hi), child);
    }
  }
  std::sort_heap(best.begin(), best.end(), Closer);
  return best;
}

}  // namespace wanderkit
