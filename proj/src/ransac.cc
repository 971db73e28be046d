#include "uavmatch/ransac.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "uavmatch/accumulator.h"

namespace uavmatch {
namespace {

std::array<std::size_t, 7> DrawSample(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::array<std::size_t, 7> sample{};
  for (std::size_t i = 0; i < 7; ++i) {
    std::size_t idx;
    do {
      idx = pick(rng);
    } while (std::find(sample.begin(), sample.begin() + i, idx) !=
             sample.begin() + i);
    sample[i] = idx;
  }
  return sample;
}

}  // namespace

void RansacConfig::Validate() const {
  if (!(max_residual > 0.0)) {
    throw InvalidConfig("max_residual must be positive");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidConfig("confidence must lie in (0, 1)");
  }
  if (max_iterations == 0) {
    throw InvalidConfig("max_iterations must be positive");
  }
}

std::size_t VerificationReport::num_inliers() const {
  return static_cast<std::size_t>(
      std::count(inlier_mask.begin(), inlier_mask.end(), true));
}

std::size_t AdaptiveIterationBound(double inlier_ratio, double confidence,
                                   std::size_t max_iterations) {
  const double all_inlier = std::pow(inlier_ratio, 7.0);
  if (all_inlier >= 1.0) return std::min<std::size_t>(1, max_iterations);
  const double denom = std::log1p(-all_inlier);
  if (denom == 0.0) return max_iterations;
  const double n = std::ceil(std::log(1.0 - confidence) / denom);
  if (!(n < static_cast<double>(max_iterations))) return max_iterations;
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

VerificationReport RansacFundamental(std::span<const Correspondence> matches,
                                     const RansacConfig& cfg) {
  cfg.Validate();
  const std::size_t n = matches.size();
  if (n < 7) {
    throw InsufficientData("RANSAC needs at least 7 correspondences");
  }
  const auto t0 = std::chrono::steady_clock::now();

  VerificationReport report;
  report.stats.input = n;
  report.stats.ransac_input = n;
  report.inlier_mask.assign(n, false);

  std::mt19937_64 rng(cfg.rng_seed);
  std::array<Correspondence, 7> sample;
  std::vector<bool> current(n, false);
  std::size_t best_count = 0;
  std::optional<FundamentalMatrix> best_f;
  std::array<std::size_t, 7> best_sample{};
  std::size_t bound = cfg.max_iterations;
  std::size_t iter = 0;

  for (; iter < bound; ++iter) {
    const auto idx = DrawSample(rng, n);
    for (std::size_t i = 0; i < 7; ++i) sample[i] = matches[idx[i]];
    for (const FundamentalMatrix& f : SevenPoint(sample)) {
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        current[i] = EpipolarResidual(matches[i], f) <= cfg.max_residual;
        count += current[i];
      }
      // Strictly better only: ties keep the earlier hypothesis.
      if (count > best_count) {
        best_count = count;
        best_f = f;
        best_sample = idx;
        report.inlier_mask = current;
        bound = AdaptiveIterationBound(
            static_cast<double>(count) / static_cast<double>(n),
            cfg.confidence, cfg.max_iterations);
      }
    }
  }
  report.iterations_used = iter;

  if (best_f && best_count >= kMinVerifiedInliers) {
    report.status = VerifyStatus::kVerified;
    report.fundamental = best_f;
    report.best_sample = best_sample;
  } else {
    report.status = VerifyStatus::kFailedToVerify;
    report.inlier_mask.assign(n, false);
  }
  report.stats.inliers = report.num_inliers();
  report.stats.verify_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

}  // namespace uavmatch
