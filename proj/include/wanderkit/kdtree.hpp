#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wanderkit/geom.hpp"

namespace wanderkit {

// Static 3-d tree over a point set for exact k-nearest-neighbour queries.
// The tree references the points; they must outlive it.
class KdTree {
 public:
  explicit KdTree(std::span<const Vec3> points, std::size_t leaf_size = 16);

  struct Neighbor {
    std::uint32_t index;
    double squared_distance;
  };

  // The k nearest points to `query`, closest first; ties broken by lower
  // index. `exclude` (if < size) is skipped, for self-queries.
  std::vector<Neighbor> Nearest(const Vec3& query, std::size_t k,
                                std::size_t exclude = SIZE_MAX) const;

  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    std::uint32_t begin, end;     // range in order_
    std::int32_t left = -1, right = -1;
    int axis = -1;
    double split = 0.0;
    Vec3 lo, hi;                  // bounding box of the range
  };

  std::int32_t Build(std::uint32_t begin, std::uint32_t end);

  std::span<const Vec3> points_;
  std::size_t leaf_size_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace wanderkit
