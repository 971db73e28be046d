#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace uavmatch {

class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One-dimensional Hough vote histogram over [lo, hi) with half-open bins
// [lo + i*w, lo + (i+1)*w). A cyclic array wraps values into its range and
// measures bin distances around the circle.
class AccumulatorArray {
 public:
  // Throws InvalidConfig unless (hi - lo) / bin_width is a positive integer.
  AccumulatorArray(double lo, double hi, double bin_width, bool cyclic);

  std::optional<std::size_t> BinOf(double value) const;
  // Returns the bin the value landed in, or nullopt if it fell outside a
  // non-cyclic range (no vote cast).
  std::optional<std::size_t> Vote(double value);
  void VoteBin(std::size_t bin);

  // Highest-count bin; ties go to the lowest index. nullopt when empty.
  std::optional<std::size_t> Peak() const;

  // Every bin holding the peak count, plus every bin within `radius` steps
  // of one of them whose count is strictly greater than fraction * peak
  // count. Sorted ascending.
  std::vector<std::size_t> SelectAroundPeak(std::size_t radius,
                                            double fraction) const;

  std::size_t BinDistance(std::size_t a, std::size_t b) const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double bin_width() const { return bin_width_; }
  bool cyclic() const { return cyclic_; }
  std::size_t num_bins() const { return counts_.size(); }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t total_votes() const { return total_; }

 private:
  double lo_;
  double hi_;
  double bin_width_;
  bool cyclic_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

}  // namespace uavmatch
