#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "uavmatch/geometry.h"
#include "uavmatch/motion.h"

namespace uavmatch {

// Static 2D kd-tree over a point set. Neighbor order is by squared distance,
// then by the caller-supplied tie-break key.
class KdTree2 {
 public:
  KdTree2(std::vector<Vec2> points, std::vector<std::size_t> tie_keys);

  // Positions of the k nearest points to points[query], excluding query
  // itself; fewer than k when the set is smaller.
  std::vector<std::size_t> NearestTo(std::size_t query, std::size_t k) const;

  std::size_t size() const { return points_.size(); }

 private:
  void Build(std::size_t begin, std::size_t end);

  std::vector<Vec2> points_;
  std::vector<std::size_t> keys_;
  std::vector<std::size_t> order_;
  std::vector<Vec2> tree_points_;        // points_ in tree order
  std::vector<std::size_t> tree_keys_;   // keys_ in tree order
  std::vector<std::uint8_t> split_dim_;  // indexed by tree position
};

// For each motion, positions of its k nearest motions by start-point
// distance (ties to the lower source id).
std::vector<std::vector<std::size_t>> KnnMotions(std::span<const Motion> motions,
                                                 std::size_t k);

}  // namespace uavmatch
