#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "uavmatch/motion.h"

namespace uavmatch {

// Image-space rotation/scale voting over all correspondence pairs. Used as
// the quadratic-cost baseline filter in benchmarks.
struct PairwiseFilterConfig {
  double rotation_bin = 10.0;     // degrees
  double log_scale_bin = 0.25;    // log2 units
  double log_scale_range = 4.0;   // votes cover [-range, range)
  std::size_t neighborhood = 1;   // 1 -> 3x3 cells around the peak
  double support_fraction = 0.5;  // of the n - 1 relations of a match
};

struct PairwiseFilterResult {
  std::vector<std::size_t> survivors;  // input positions, ascending
  std::size_t peak_rotation_bin = 0;
  std::size_t peak_scale_bin = 0;
};

// For every pair (i, j) the rotation and log2-scale taking p1_i -> p1_j onto
// p2_i -> p2_j vote into a 2D histogram. A correspondence survives when more
// than support_fraction of its relations land near the peak cell. Pairs
// with a zero-length difference vector are skipped. O(n^2).
PairwiseFilterResult PairwiseVoteFilter(std::span<const Correspondence> matches,
                                        const PairwiseFilterConfig& cfg = {});

}  // namespace uavmatch
