#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uavmatch/consistency.h"
#include "uavmatch/pairwise_filter.h"
#include "uavmatch/ransac.h"
#include "uavmatch/synth.h"

namespace uavmatch {

enum class Method { kPlainRansac, kPairwiseRansac, kHmccRansac };

std::string_view MethodName(Method method);

struct MethodRow {
  Method method = Method::kPlainRansac;
  double filter_seconds = 0.0;
  double verify_seconds = 0.0;
  double sum_seconds = 0.0;  // filter + verify
  std::size_t filter_survivors = 0;
  std::size_t n_inliers = 0;
  PrecisionRecall accuracy;
  bool failed = false;
};

struct BenchRow {
  std::size_t pair = 0;
  std::size_t n_matches = 0;
  std::vector<MethodRow> methods;
};

struct Aggregate {
  double max = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  double sum = 0.0;
};

struct MethodAggregate {
  Method method = Method::kPlainRansac;
  Aggregate filter;
  Aggregate verify;
  Aggregate total;
  Aggregate inliers;
};

struct BenchReport {
  std::vector<Method> methods;
  std::vector<BenchRow> rows;
  std::vector<MethodAggregate> aggregates;
};

struct BenchOptions {
  std::vector<Method> methods{Method::kPlainRansac, Method::kPairwiseRansac,
                              Method::kHmccRansac};
  HmccConfig hmcc;
  RansacConfig ransac;  // pair i uses rng_seed + i for every method
  PairwiseFilterConfig pairwise;
  ProjectionPlane plane = {-100.0};
  // Runs pairs concurrently; only inlier counts are meaningful then.
  bool parallel = false;
};

Aggregate Summarize(std::span<const double> values);

MethodRow RunMethod(Method method, const LabeledMatchSet& pair,
                    const BenchOptions& options, std::uint64_t seed);

// Every selected method on every pair with identical seeds per pair.
// A method that fails to verify is flagged in its row.
BenchReport RunBenchmark(std::span<const LabeledMatchSet> pairs,
                         const BenchOptions& options);

// Tab-separated table: one row per pair with Filter/Verif/Sum/Inliers per
// method, then Max/Mean/Stddev/Sum rows. counts_only drops time columns.
std::string FormatBenchTable(const BenchReport& report, bool counts_only);

}  // namespace uavmatch
