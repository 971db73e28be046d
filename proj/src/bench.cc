#include "uavmatch/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <iomanip>
#include <sstream>

#include "uavmatch/pipeline.h"

namespace uavmatch {
namespace {

double SecondsSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

BenchRow RunPair(std::size_t index, const LabeledMatchSet& pair,
                 const BenchOptions& options) {
  BenchRow row;
  row.pair = index;
  row.n_matches = pair.correspondences.size();
  for (Method m : options.methods) {
    row.methods.push_back(
        RunMethod(m, pair, options, options.ransac.rng_seed + index));
  }
  return row;
}

}  // namespace

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kPlainRansac:
      return "plain_ransac";
    case Method::kPairwiseRansac:
      return "pairwise_ransac";
    case Method::kHmccRansac:
      return "hmcc_ransac";
  }
  return "unknown";
}

Aggregate Summarize(std::span<const double> values) {
  Aggregate a;
  if (values.empty()) return a;
  a.max = *std::max_element(values.begin(), values.end());
  for (double v : values) a.sum += v;
  a.mean = a.sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - a.mean) * (v - a.mean);
  a.stddev = std::sqrt(ss / static_cast<double>(values.size()));
  return a;
}

MethodRow RunMethod(Method method, const LabeledMatchSet& pair,
                    const BenchOptions& options, std::uint64_t seed) {
  RansacConfig ransac = options.ransac;
  ransac.rng_seed = seed;
  const StereoGeometry geometry = pair.NoisyGeometry(options.plane);

  MethodRow row;
  row.method = method;
  VerificationReport report;
  switch (method) {
    case Method::kPlainRansac: {
      report = PlainRansac(pair.correspondences, geometry, ransac);
      row.filter_survivors = pair.correspondences.size();
      break;
    }
    case Method::kPairwiseRansac: {
      const auto t0 = std::chrono::steady_clock::now();
      const auto undistorted = UndistortMatches(pair.correspondences, geometry);
      const auto filtered = PairwiseVoteFilter(undistorted, options.pairwise);
      std::vector<bool> keep(undistorted.size(), false);
      for (std::size_t i : filtered.survivors) keep[i] = true;
      const double filter_seconds = SecondsSince(t0);
      report = RansacOnSubset(undistorted, keep, ransac);
      report.stats.filter_seconds = filter_seconds;
      row.filter_survivors = filtered.survivors.size();
      break;
    }
    case Method::kHmccRansac: {
      report = HmccRansac(pair.correspondences, geometry, options.hmcc, ransac);
      row.filter_survivors = report.stats.after_length;
      break;
    }
  }
  row.filter_seconds = report.stats.filter_seconds;
  row.verify_seconds = report.stats.verify_seconds;
  row.sum_seconds = row.filter_seconds + row.verify_seconds;
  row.n_inliers = report.num_inliers();
  row.failed = !report.verified();
  row.accuracy = ComputePrecisionRecall(report.inlier_mask, pair.labels);
  return row;
}

BenchReport RunBenchmark(std::span<const LabeledMatchSet> pairs,
                         const BenchOptions& options) {
  options.hmcc.Validate();
  options.ransac.Validate();
  BenchReport report;
  report.methods = options.methods;
  report.rows.resize(pairs.size());
  if (options.parallel) {
    std::vector<std::future<BenchRow>> jobs;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      jobs.push_back(std::async(std::launch::async, RunPair, i,
                                std::cref(pairs[i]), std::cref(options)));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) report.rows[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      report.rows[i] = RunPair(i, pairs[i], options);
    }
  }

  for (std::size_t m = 0; m < options.methods.size(); ++m) {
    std::vector<double> filter, verify, total, inliers;
    for (const BenchRow& row : report.rows) {
      filter.push_back(row.methods[m].filter_seconds);
      verify.push_back(row.methods[m].verify_seconds);
      total.push_back(row.methods[m].sum_seconds);
      inliers.push_back(static_cast<double>(row.methods[m].n_inliers));
    }
    report.aggregates.push_back({options.methods[m], Summarize(filter),
                                 Summarize(verify), Summarize(total),
                                 Summarize(inliers)});
  }
  return report;
}

std::string FormatBenchTable(const BenchReport& report, bool counts_only) {
  std::ostringstream out;
  out << std::setprecision(6) << std::fixed;
  out << "pair\tmatches";
  for (Method m : report.methods) {
    const auto name = MethodName(m);
    if (!counts_only) {
      out << '\t' << name << ".filter\t" << name << ".verif\t" << name
          << ".sum";
    }
    out << '\t' << name << ".inliers\t" << name << ".failed";
  }
  out << '\n';
  for (const BenchRow& row : report.rows) {
    out << row.pair + 1 << '\t' << row.n_matches;
    for (const MethodRow& r : row.methods) {
      if (!counts_only) {
        out << '\t' << r.filter_seconds << '\t' << r.verify_seconds << '\t'
            << r.sum_seconds;
      }
      out << '\t' << r.n_inliers << '\t' << (r.failed ? 1 : 0);
    }
    out << '\n';
  }
  const char* labels[] = {"Max", "Mean", "Stddev", "Sum"};
  for (int k = 0; k < 4; ++k) {
    out << labels[k] << "\t-";
    for (const MethodAggregate& a : report.aggregates) {
      auto pick = [k](const Aggregate& g) {
        switch (k) {
          case 0:
            return g.max;
          case 1:
            return g.mean;
          case 2:
            return g.stddev;
          default:
            return g.sum;
        }
      };
      if (!counts_only) {
        out << '\t' << pick(a.filter) << '\t' << pick(a.verify) << '\t'
            << pick(a.total);
      }
      out << '\t' << pick(a.inliers) << "\t-";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace uavmatch
