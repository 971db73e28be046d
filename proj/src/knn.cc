#include "uavmatch/knn.h"

#include <algorithm>
#include <numeric>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace uavmatch {
namespace {

constexpr std::size_t kLeafSize = 8;

struct Candidate {
  double d2;
  std::size_t key;
  std::size_t pos;
  bool operator<(const Candidate& o) const {
    return std::tie(d2, key) < std::tie(o.d2, o.key);
  }
};

}  // namespace

KdTree2::KdTree2(std::vector<Vec2> points, std::vector<std::size_t> tie_keys)
    : points_(std::move(points)), keys_(std::move(tie_keys)) {
  if (keys_.size() != points_.size()) {
    throw std::invalid_argument("KdTree2: one tie-break key per point");
  }
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  split_dim_.assign(points_.size(), 0);
  Build(0, order_.size());
  tree_points_.reserve(order_.size());
  tree_keys_.reserve(order_.size());
  for (std::size_t pos : order_) {
    tree_points_.push_back(points_[pos]);
    tree_keys_.push_back(keys_[pos]);
  }
}

void KdTree2::Build(std::size_t begin, std::size_t end) {
  if (end - begin <= kLeafSize) return;
  Vec2 lo = points_[order_[begin]];
  Vec2 hi = lo;
  for (std::size_t i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  const int dim = (hi.x() - lo.x()) >= (hi.y() - lo.y()) ? 0 : 1;
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end, [&](std::size_t a, std::size_t b) {
                     return points_[a][dim] < points_[b][dim];
                   });
  split_dim_[mid] = static_cast<std::uint8_t>(dim);
  Build(begin, mid);
  Build(mid + 1, end);
}

std::vector<std::size_t> KdTree2::NearestTo(std::size_t query,
                                            std::size_t k) const {
  std::vector<std::size_t> result;
  if (k == 0 || points_.size() < 2) return result;
  const Vec2& q = points_.at(query);
  // Best candidates so far, sorted ascending; slot i holds a tree position.
  std::vector<Candidate> best;
  best.reserve(k + 1);

  auto consider = [&](std::size_t slot) {
    const std::size_t pos = order_[slot];
    if (pos == query) return;
    const Candidate c{(tree_points_[slot] - q).squaredNorm(), tree_keys_[slot],
                      pos};
    if (best.size() == k && !(c < best.back())) return;
    auto at = std::upper_bound(best.begin(), best.end(), c);
    best.insert(at, c);
    if (best.size() > k) best.pop_back();
  };
  auto bound = [&] {
    return best.size() < k ? std::numeric_limits<double>::infinity()
                           : best.back().d2;
  };

  auto search = [&](auto&& self, std::size_t begin, std::size_t end) -> void {
    if (end - begin <= kLeafSize) {
      for (std::size_t i = begin; i < end; ++i) consider(i);
      return;
    }
    const std::size_t mid = begin + (end - begin) / 2;
    const int dim = split_dim_[mid];
    consider(mid);
    const double diff = q[dim] - tree_points_[mid][dim];
    // Equal distance must still be explored: a tie may win on key.
    if (diff < 0.0) {
      self(self, begin, mid);
      if (diff * diff <= bound()) self(self, mid + 1, end);
    } else {
      self(self, mid + 1, end);
      if (diff * diff <= bound()) self(self, begin, mid);
    }
  };
  search(search, 0, order_.size());

  result.reserve(best.size());
  for (const Candidate& c : best) result.push_back(c.pos);
  return result;
}

std::vector<std::vector<std::size_t>> KnnMotions(std::span<const Motion> motions,
                                                 std::size_t k) {
  std::vector<Vec2> starts;
  std::vector<std::size_t> ids;
  starts.reserve(motions.size());
  ids.reserve(motions.size());
  for (const Motion& m : motions) {
    starts.push_back(m.start);
    ids.push_back(m.source_id);
  }
  const KdTree2 tree(std::move(starts), std::move(ids));
  std::vector<std::vector<std::size_t>> neighbors(motions.size());
  for (std::size_t i = 0; i < motions.size(); ++i) {
    neighbors[i] = tree.NearestTo(i, k);
  }
  return neighbors;
}

}  // namespace uavmatch
