#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "uavmatch/accumulator.h"
#include "uavmatch/motion.h"

namespace uavmatch {

// Parameters of the hierarchical motion consistency constraint.
struct HmccConfig {
  // Global direction vote: cyclic array over [0, 360).
  double dir_bin_width = 10.0;
  std::size_t dir_peak_radius = 5;
  double dir_peak_fraction = 0.20;
  // Local direction-change vote: non-cyclic array over [0, dc_range).
  double dc_range = 30.0;
  double dc_bin_width = 3.0;
  std::size_t dc_peak_radius = 3;
  double dc_peak_fraction = 0.40;
  std::size_t k_neighbors = 7;
  // Global length z-score test.
  double zscore_threshold = 3.0;

  // Throws InvalidConfig on non-positive fields or non-dividing bin widths.
  void Validate() const;
};

// Result of one consistency stage. All id lists hold Motion::source_id in
// stage-input order. survivors, rejected and passthrough partition the
// input; kept = survivors + passthrough, in input order.
struct StageOutcome {
  std::vector<std::size_t> survivors;
  std::vector<std::size_t> rejected;
  // Motions the stage could not judge (degenerate, or without neighbors);
  // they move on to the next stage.
  std::vector<std::size_t> passthrough;
  std::vector<std::size_t> kept;

  std::optional<AccumulatorArray> accumulator;  // voting stages only
  std::optional<std::size_t> peak_bin;
  std::vector<std::size_t> selected_bins;
  // The stage had nothing to vote on and let everything through.
  bool skipped = false;
};

// Circular absolute difference of two directions, in [0, 180].
double DirectionChange(double theta_i, double theta_j);

// First stage: one vote per non-degenerate motion in a cyclic direction
// histogram; survivors are motions whose bin was selected around the peak.
StageOutcome GlobalDirectionVote(std::span<const Motion> motions,
                                 const HmccConfig& cfg);

// Second stage. neighbors[i] holds positions (into `motions`) of motion i's
// nearest neighbors. Each direction-change below dc_range casts a vote; a
// motion's own bin is that of the lower median of its direction-changes.
StageOutcome LocalDirectionChangeVote(
    std::span<const Motion> motions,
    std::span<const std::vector<std::size_t>> neighbors, const HmccConfig& cfg);

// Second stage with neighbors searched among the non-degenerate motions.
StageOutcome LocalDirectionChangeVote(std::span<const Motion> motions,
                                      const HmccConfig& cfg);

// Third stage: rejects |l - mean| / sigma > threshold (population sigma).
StageOutcome LengthZscoreFilter(std::span<const Motion> motions,
                                double threshold);

struct HmccResult {
  StageOutcome direction;
  StageOutcome direction_change;
  StageOutcome length;
  // Source ids of the motions that passed all three stages, input order.
  std::vector<std::size_t> reduced_ids;
};

// Direction vote, then k-NN over its survivors and the direction-change
// vote, then the length test.
HmccResult HmccFilter(std::span<const Motion> motions, const HmccConfig& cfg);

// Motions whose source id is in `ids`; `ids` must follow the order of
// `motions` (as every StageOutcome list does).
std::vector<Motion> SelectMotions(std::span<const Motion> motions,
                                  std::span<const std::size_t> ids);

}  // namespace uavmatch
