#pragma once

#include <span>
#include <vector>

#include "uavmatch/consistency.h"
#include "uavmatch/motion.h"
#include "uavmatch/ransac.h"

namespace uavmatch {

struct FilterOutcome {
  MotionSet motions;
  HmccResult hmcc;
  // Survivors of all three stages, one flag per input correspondence.
  std::vector<bool> survivor_mask;
  StageStats stats;
};

// Motion generation plus the three consistency stages. The input is indexed
// by position; Correspondence::id is ignored.
FilterOutcome RunHmccFilter(std::span<const Correspondence> matches,
                            const StereoGeometry& geometry,
                            const HmccConfig& cfg);

// Both points of every correspondence undistorted, ids set to positions.
std::vector<Correspondence> UndistortMatches(
    std::span<const Correspondence> matches, const StereoGeometry& geometry);

// HMCC filter, then RANSAC on the reduced set. The mask and best sample are
// expressed over the original input positions, and F over undistorted
// pixels. Fewer than 7 survivors give kFailedToVerify with stats intact.
VerificationReport HmccRansac(std::span<const Correspondence> matches,
                              const StereoGeometry& geometry,
                              const HmccConfig& hmcc_cfg,
                              const RansacConfig& ransac_cfg);

// RANSAC on the undistorted, unfiltered set. Fewer than 7 matches give
// kFailedToVerify.
VerificationReport PlainRansac(std::span<const Correspondence> matches,
                               const StereoGeometry& geometry,
                               const RansacConfig& ransac_cfg);

// RANSAC restricted to the correspondences flagged in `keep`, with the
// result mapped back to the full input. `keep` has one flag per match.
VerificationReport RansacOnSubset(std::span<const Correspondence> undistorted,
                                  const std::vector<bool>& keep,
                                  const RansacConfig& ransac_cfg);

}  // namespace uavmatch
