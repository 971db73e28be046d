#include "uavmatch/accumulator.h"

#include <algorithm>
#include <cmath>

namespace uavmatch {

AccumulatorArray::AccumulatorArray(double lo, double hi, double bin_width,
                                   bool cyclic)
    : lo_(lo), hi_(hi), bin_width_(bin_width), cyclic_(cyclic) {
  if (!(bin_width > 0.0) || !(hi > lo) || !std::isfinite(hi - lo)) {
    throw InvalidConfig("accumulator needs bin_width > 0 and hi > lo");
  }
  const double bins = (hi - lo) / bin_width;
  const double rounded = std::round(bins);
  if (rounded < 1.0 || std::abs(bins - rounded) > 1e-9 * rounded) {
    throw InvalidConfig("accumulator range is not a whole number of bins");
  }
  counts_.assign(static_cast<std::size_t>(rounded), 0);
}

std::optional<std::size_t> AccumulatorArray::BinOf(double value) const {
  if (!std::isfinite(value)) return std::nullopt;
  const double span = hi_ - lo_;
  double v = value - lo_;
  if (cyclic_) {
    v = std::fmod(v, span);
    if (v < 0.0) v += span;
    if (v >= span) v = 0.0;
  } else if (v < 0.0 || v >= span) {
    return std::nullopt;
  }
  auto bin = static_cast<std::size_t>(std::floor(v / bin_width_));
  // v < span but v / w may still round up to the bin count.
  return std::min(bin, counts_.size() - 1);
}

std::optional<std::size_t> AccumulatorArray::Vote(double value) {
  const auto bin = BinOf(value);
  if (bin) VoteBin(*bin);
  return bin;
}

void AccumulatorArray::VoteBin(std::size_t bin) {
  ++counts_.at(bin);
  ++total_;
}

std::optional<std::size_t> AccumulatorArray::Peak() const {
  if (total_ == 0) return std::nullopt;
  // max_element returns the first maximum.
  return static_cast<std::size_t>(
      std::max_element(counts_.begin(), counts_.end()) - counts_.begin());
}

std::size_t AccumulatorArray::BinDistance(std::size_t a, std::size_t b) const {
  const std::size_t d = a > b ? a - b : b - a;
  return cyclic_ ? std::min(d, counts_.size() - d) : d;
}

std::vector<std::size_t> AccumulatorArray::SelectAroundPeak(
    std::size_t radius, double fraction) const {
  std::vector<std::size_t> selected;
  const auto peak = Peak();
  if (!peak) return selected;
  const std::uint64_t top = counts_[*peak];
  const double threshold = fraction * static_cast<double>(top);
  // Every bin tied with the peak is a peak; picking one of them by index
  // would make the selection depend on where the array starts.
  std::vector<std::size_t> peaks;
  for (std::size_t b = 0; b < counts_.size(); ++b) {
    if (counts_[b] == top) peaks.push_back(b);
  }
  for (std::size_t b = 0; b < counts_.size(); ++b) {
    const bool near = std::any_of(peaks.begin(), peaks.end(), [&](std::size_t p) {
      return BinDistance(b, p) <= radius;
    });
    if (counts_[b] == top ||
        (near && static_cast<double>(counts_[b]) > threshold)) {
      selected.push_back(b);
    }
  }
  return selected;
}

}  // namespace uavmatch
