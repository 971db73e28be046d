#include "uavmatch/pairwise_filter.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>

#include "uavmatch/accumulator.h"

namespace uavmatch {
namespace {

struct Grid {
  std::size_t rotation_bins;
  std::size_t scale_bins;
};

std::optional<std::pair<std::size_t, std::size_t>> Cell(
    const Correspondence& a, const Correspondence& b,
    const PairwiseFilterConfig& cfg, const Grid& grid) {
  const Vec2 v1 = b.p1 - a.p1;
  const Vec2 v2 = b.p2 - a.p2;
  const double n1 = v1.norm();
  const double n2 = v2.norm();
  if (n1 == 0.0 || n2 == 0.0) return std::nullopt;
  double rotation =
      (std::atan2(v2.y(), v2.x()) - std::atan2(v1.y(), v1.x())) * 180.0 /
      std::numbers::pi;
  rotation = std::fmod(rotation, 360.0);
  if (rotation < 0.0) rotation += 360.0;
  auto rbin = static_cast<std::size_t>(rotation / cfg.rotation_bin);
  if (rbin >= grid.rotation_bins) rbin = 0;
  const double log_scale = std::log2(n2 / n1) + cfg.log_scale_range;
  if (!(log_scale >= 0.0)) return std::nullopt;
  const auto sbin = static_cast<std::size_t>(log_scale / cfg.log_scale_bin);
  if (sbin >= grid.scale_bins) return std::nullopt;
  return std::make_pair(rbin, sbin);
}

}  // namespace

PairwiseFilterResult PairwiseVoteFilter(std::span<const Correspondence> matches,
                                        const PairwiseFilterConfig& cfg) {
  const double rbins = 360.0 / cfg.rotation_bin;
  const double sbins = 2.0 * cfg.log_scale_range / cfg.log_scale_bin;
  if (!(cfg.rotation_bin > 0.0) || !(cfg.log_scale_bin > 0.0) ||
      std::abs(rbins - std::round(rbins)) > 1e-9 ||
      std::abs(sbins - std::round(sbins)) > 1e-9 || sbins < 1.0) {
    throw InvalidConfig("pairwise filter bins must tile their ranges");
  }
  const Grid grid{static_cast<std::size_t>(std::round(rbins)),
                  static_cast<std::size_t>(std::round(sbins))};
  PairwiseFilterResult result;
  const std::size_t n = matches.size();
  if (n < 2) {
    for (std::size_t i = 0; i < n; ++i) result.survivors.push_back(i);
    return result;
  }

  std::vector<std::uint32_t> votes(grid.rotation_bins * grid.scale_bins, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (const auto cell = Cell(matches[i], matches[j], cfg, grid)) {
        ++votes[cell->first * grid.scale_bins + cell->second];
      }
    }
  }
  const auto peak = static_cast<std::size_t>(
      std::max_element(votes.begin(), votes.end()) - votes.begin());
  result.peak_rotation_bin = peak / grid.scale_bins;
  result.peak_scale_bin = peak % grid.scale_bins;

  auto near_peak = [&](std::size_t rbin, std::size_t sbin) {
    const std::size_t dr_raw = rbin > result.peak_rotation_bin
                                   ? rbin - result.peak_rotation_bin
                                   : result.peak_rotation_bin - rbin;
    const std::size_t dr = std::min(dr_raw, grid.rotation_bins - dr_raw);
    const std::size_t ds = sbin > result.peak_scale_bin
                               ? sbin - result.peak_scale_bin
                               : result.peak_scale_bin - sbin;
    return dr <= cfg.neighborhood && ds <= cfg.neighborhood;
  };

  std::vector<std::size_t> support(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto cell = Cell(matches[i], matches[j], cfg, grid);
      if (cell && near_peak(cell->first, cell->second)) {
        ++support[i];
        ++support[j];
      }
    }
  }
  const double needed = cfg.support_fraction * static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<double>(support[i]) > needed) result.survivors.push_back(i);
  }
  return result;
}

}  // namespace uavmatch
