#include "uavmatch/consistency.h"

#include <algorithm>
#include <cmath>

#include "uavmatch/knn.h"

namespace uavmatch {
namespace {

void FinishKept(std::span<const Motion> motions, StageOutcome& out) {
  // survivors and passthrough are each in input order; merge by position.
  std::size_t si = 0, pi = 0;
  out.kept.clear();
  out.kept.reserve(out.survivors.size() + out.passthrough.size());
  for (const Motion& m : motions) {
    if (si < out.survivors.size() && out.survivors[si] == m.source_id) {
      out.kept.push_back(m.source_id);
      ++si;
    } else if (pi < out.passthrough.size() &&
               out.passthrough[pi] == m.source_id) {
      out.kept.push_back(m.source_id);
      ++pi;
    }
  }
}

std::vector<bool> BinMask(const AccumulatorArray& acc,
                          const std::vector<std::size_t>& bins) {
  std::vector<bool> mask(acc.num_bins(), false);
  for (std::size_t b : bins) mask[b] = true;
  return mask;
}

}  // namespace

void HmccConfig::Validate() const {
  if (!(dir_bin_width > 0.0) || !(dir_peak_fraction > 0.0) ||
      !(dc_range > 0.0) || !(dc_bin_width > 0.0) ||
      !(dc_peak_fraction > 0.0) || !(zscore_threshold > 0.0) ||
      dir_peak_radius == 0 || dc_peak_radius == 0 || k_neighbors == 0) {
    throw InvalidConfig("HMCC parameters must all be positive");
  }
  // The accumulator constructors reject widths that do not divide the range.
  AccumulatorArray(0.0, 360.0, dir_bin_width, true);
  AccumulatorArray(0.0, dc_range, dc_bin_width, false);
}

double DirectionChange(double theta_i, double theta_j) {
  const double d = std::abs(theta_i - theta_j);
  return std::min(d, 360.0 - d);
}

StageOutcome GlobalDirectionVote(std::span<const Motion> motions,
                                 const HmccConfig& cfg) {
  StageOutcome out;
  AccumulatorArray acc(0.0, 360.0, cfg.dir_bin_width, true);
  std::vector<std::size_t> bins(motions.size(), 0);
  for (std::size_t i = 0; i < motions.size(); ++i) {
    if (!motions[i].degenerate) bins[i] = *acc.Vote(motions[i].direction);
  }
  out.peak_bin = acc.Peak();
  out.selected_bins =
      acc.SelectAroundPeak(cfg.dir_peak_radius, cfg.dir_peak_fraction);
  out.skipped = !out.peak_bin.has_value();
  const auto selected = BinMask(acc, out.selected_bins);
  for (std::size_t i = 0; i < motions.size(); ++i) {
    const Motion& m = motions[i];
    if (m.degenerate) {
      out.passthrough.push_back(m.source_id);
    } else if (selected[bins[i]]) {
      out.survivors.push_back(m.source_id);
    } else {
      out.rejected.push_back(m.source_id);
    }
  }
  out.accumulator = std::move(acc);
  FinishKept(motions, out);
  return out;
}

StageOutcome LocalDirectionChangeVote(
    std::span<const Motion> motions,
    std::span<const std::vector<std::size_t>> neighbors,
    const HmccConfig& cfg) {
  StageOutcome out;
  AccumulatorArray acc(0.0, cfg.dc_range, cfg.dc_bin_width, false);
  std::vector<std::optional<std::size_t>> own_bin(motions.size());
  std::vector<bool> judged(motions.size(), false);
  std::vector<double> dclist;
  for (std::size_t i = 0; i < motions.size(); ++i) {
    const Motion& m = motions[i];
    if (m.degenerate) continue;
    dclist.clear();
    for (std::size_t j : neighbors[i]) {
      if (j == i || motions[j].degenerate) continue;
      dclist.push_back(DirectionChange(m.direction, motions[j].direction));
    }
    if (dclist.empty()) continue;
    judged[i] = true;
    for (double dc : dclist) acc.Vote(dc);
    const std::size_t mid = (dclist.size() - 1) / 2;
    std::nth_element(dclist.begin(), dclist.begin() + mid, dclist.end());
    own_bin[i] = acc.BinOf(dclist[mid]);
  }
  out.peak_bin = acc.Peak();
  out.selected_bins =
      acc.SelectAroundPeak(cfg.dc_peak_radius, cfg.dc_peak_fraction);
  out.skipped = std::none_of(judged.begin(), judged.end(),
                             [](bool b) { return b; });
  const auto selected = BinMask(acc, out.selected_bins);
  for (std::size_t i = 0; i < motions.size(); ++i) {
    const Motion& m = motions[i];
    if (!judged[i]) {
      out.passthrough.push_back(m.source_id);
    } else if (own_bin[i] && selected[*own_bin[i]]) {
      out.survivors.push_back(m.source_id);
    } else {
      out.rejected.push_back(m.source_id);
    }
  }
  out.accumulator = std::move(acc);
  FinishKept(motions, out);
  return out;
}

StageOutcome LocalDirectionChangeVote(std::span<const Motion> motions,
                                      const HmccConfig& cfg) {
  std::vector<Motion> directional;
  std::vector<std::size_t> position;
  for (std::size_t i = 0; i < motions.size(); ++i) {
    if (motions[i].degenerate) continue;
    directional.push_back(motions[i]);
    position.push_back(i);
  }
  std::vector<std::vector<std::size_t>> neighbors(motions.size());
  const auto local = KnnMotions(directional, cfg.k_neighbors);
  for (std::size_t a = 0; a < local.size(); ++a) {
    auto& dst = neighbors[position[a]];
    dst.reserve(local[a].size());
    for (std::size_t b : local[a]) dst.push_back(position[b]);
  }
  return LocalDirectionChangeVote(motions, neighbors, cfg);
}

StageOutcome LengthZscoreFilter(std::span<const Motion> motions,
                                double threshold) {
  StageOutcome out;
  const std::size_t n = motions.size();
  double sigma = 0.0;
  double mean = 0.0;
  if (n >= 2) {
    for (const Motion& m : motions) mean += m.length;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const Motion& m : motions) ss += (m.length - mean) * (m.length - mean);
    sigma = std::sqrt(ss / static_cast<double>(n));
  }
  out.skipped = n < 2 || sigma < 1e-12;
  for (const Motion& m : motions) {
    if (!out.skipped && std::abs(m.length - mean) / sigma > threshold) {
      out.rejected.push_back(m.source_id);
    } else {
      out.survivors.push_back(m.source_id);
    }
  }
  out.kept = out.survivors;
  return out;
}

std::vector<Motion> SelectMotions(std::span<const Motion> motions,
                                  std::span<const std::size_t> ids) {
  std::vector<Motion> selected;
  selected.reserve(ids.size());
  std::size_t j = 0;
  for (const Motion& m : motions) {
    if (j < ids.size() && ids[j] == m.source_id) {
      selected.push_back(m);
      ++j;
    }
  }
  return selected;
}

HmccResult HmccFilter(std::span<const Motion> motions, const HmccConfig& cfg) {
  HmccResult result;
  result.direction = GlobalDirectionVote(motions, cfg);
  const auto after_direction = SelectMotions(motions, result.direction.kept);
  result.direction_change = LocalDirectionChangeVote(after_direction, cfg);
  const auto after_change =
      SelectMotions(after_direction, result.direction_change.kept);
  result.length = LengthZscoreFilter(after_change, cfg.zscore_threshold);
  result.reduced_ids = result.length.kept;
  return result;
}

}  // namespace uavmatch
