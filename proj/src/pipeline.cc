#include "uavmatch/pipeline.h"

#include <chrono>

namespace uavmatch {
namespace {

double SecondsSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

std::vector<Correspondence> UndistortMatches(
    std::span<const Correspondence> matches, const StereoGeometry& geometry) {
  std::vector<Correspondence> out(matches.size());
  for (std::size_t i = 0; i < matches.size(); ++i) {
    out[i].p1 = UndistortPoint(matches[i].p1, geometry.intrinsics1).point;
    out[i].p2 = UndistortPoint(matches[i].p2, geometry.intrinsics2).point;
    out[i].id = i;
  }
  return out;
}

FilterOutcome RunHmccFilter(std::span<const Correspondence> matches,
                            const StereoGeometry& geometry,
                            const HmccConfig& cfg) {
  cfg.Validate();
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Correspondence> indexed(matches.begin(), matches.end());
  for (std::size_t i = 0; i < indexed.size(); ++i) indexed[i].id = i;

  FilterOutcome out;
  out.motions = GenerateMotions(indexed, geometry);
  out.hmcc = HmccFilter(out.motions.motions, cfg);
  out.survivor_mask.assign(matches.size(), false);
  for (std::size_t id : out.hmcc.reduced_ids) out.survivor_mask[id] = true;

  out.stats.input = matches.size();
  out.stats.dropped = out.motions.dropped.size();
  out.stats.out_of_frame = out.motions.out_of_frame.size();
  out.stats.after_direction = out.hmcc.direction.kept.size();
  out.stats.after_direction_change = out.hmcc.direction_change.kept.size();
  out.stats.after_length = out.hmcc.length.kept.size();
  out.stats.filter_seconds = SecondsSince(t0);
  return out;
}

VerificationReport RansacOnSubset(std::span<const Correspondence> undistorted,
                                  const std::vector<bool>& keep,
                                  const RansacConfig& ransac_cfg) {
  std::vector<Correspondence> subset;
  std::vector<std::size_t> position;
  for (std::size_t i = 0; i < undistorted.size(); ++i) {
    if (!keep[i]) continue;
    subset.push_back(undistorted[i]);
    position.push_back(i);
  }

  VerificationReport report;
  report.inlier_mask.assign(undistorted.size(), false);
  report.stats.input = undistorted.size();
  report.stats.ransac_input = subset.size();
  if (subset.size() < 7) {
    ransac_cfg.Validate();
    report.status = VerifyStatus::kFailedToVerify;
    return report;
  }
  const VerificationReport sub = RansacFundamental(subset, ransac_cfg);
  report.status = sub.status;
  report.fundamental = sub.fundamental;
  report.iterations_used = sub.iterations_used;
  report.stats.inliers = sub.stats.inliers;
  report.stats.verify_seconds = sub.stats.verify_seconds;
  for (std::size_t j = 0; j < subset.size(); ++j) {
    if (sub.inlier_mask[j]) report.inlier_mask[position[j]] = true;
  }
  if (sub.best_sample) {
    std::array<std::size_t, 7> mapped{};
    for (std::size_t i = 0; i < 7; ++i) mapped[i] = position[(*sub.best_sample)[i]];
    report.best_sample = mapped;
  }
  return report;
}

VerificationReport HmccRansac(std::span<const Correspondence> matches,
                              const StereoGeometry& geometry,
                              const HmccConfig& hmcc_cfg,
                              const RansacConfig& ransac_cfg) {
  ransac_cfg.Validate();
  FilterOutcome filtered = RunHmccFilter(matches, geometry, hmcc_cfg);
  const auto undistorted = UndistortMatches(matches, geometry);
  VerificationReport report =
      RansacOnSubset(undistorted, filtered.survivor_mask, ransac_cfg);

  const std::size_t ransac_input = report.stats.ransac_input;
  const std::size_t inliers = report.stats.inliers;
  const double verify_seconds = report.stats.verify_seconds;
  report.stats = filtered.stats;
  report.stats.ransac_input = ransac_input;
  report.stats.inliers = inliers;
  report.stats.verify_seconds = verify_seconds;
  report.filter = std::move(filtered.hmcc);
  return report;
}

VerificationReport PlainRansac(std::span<const Correspondence> matches,
                               const StereoGeometry& geometry,
                               const RansacConfig& ransac_cfg) {
  const auto undistorted = UndistortMatches(matches, geometry);
  return RansacOnSubset(undistorted,
                        std::vector<bool>(undistorted.size(), true), ransac_cfg);
}

}  // namespace uavmatch
