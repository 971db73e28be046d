#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "uavmatch/consistency.h"
#include "uavmatch/fundamental.h"
#include "uavmatch/motion.h"

namespace uavmatch {

class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A hypothesis needs at least this many inliers to verify a pair.
inline constexpr std::size_t kMinVerifiedInliers = 8;

struct RansacConfig {
  double max_residual = 1.0;  // Sampson distance, pixels
  double confidence = 0.99;
  std::size_t max_iterations = 10000;
  std::uint64_t rng_seed = 0;

  void Validate() const;
};

// Per-stage counts and wall-clock times of one verification run.
struct StageStats {
  std::size_t input = 0;
  std::size_t dropped = 0;       // rays that missed the projection plane
  std::size_t out_of_frame = 0;  // kept, but outside the image frame
  std::size_t after_direction = 0;
  std::size_t after_direction_change = 0;
  std::size_t after_length = 0;
  std::size_t ransac_input = 0;
  std::size_t inliers = 0;
  double filter_seconds = 0.0;
  double verify_seconds = 0.0;
};

enum class VerifyStatus { kVerified, kFailedToVerify };

struct VerificationReport {
  VerifyStatus status = VerifyStatus::kFailedToVerify;
  // One flag per input correspondence, input order.
  std::vector<bool> inlier_mask;
  std::optional<FundamentalMatrix> fundamental;
  StageStats stats;
  std::size_t iterations_used = 0;
  // Input positions of the winning minimal sample.
  std::optional<std::array<std::size_t, 7>> best_sample;
  // Present when a motion filter ran before RANSAC.
  std::optional<HmccResult> filter;

  bool verified() const { return status == VerifyStatus::kVerified; }
  std::size_t num_inliers() const;
};

// Iterations needed to draw one all-inlier 7-sample with the given
// confidence at the given inlier ratio, capped at max_iterations.
std::size_t AdaptiveIterationBound(double inlier_ratio, double confidence,
                                   std::size_t max_iterations);

// Plain RANSAC over seven-point hypotheses. Correspondences are taken as
// undistorted pixels. No refit: the report carries the best hypothesis.
// Throws InsufficientData for fewer than 7 correspondences.
VerificationReport RansacFundamental(std::span<const Correspondence> matches,
                                     const RansacConfig& cfg);

}  // namespace uavmatch
