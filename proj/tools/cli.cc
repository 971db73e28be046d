#include "cli.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "uavmatch/bench.h"
#include "uavmatch/io.h"
#include "uavmatch/pipeline.h"
#include "uavmatch/synth.h"

namespace uavmatch::cli {
namespace {

namespace fs = std::filesystem;

struct InputOptions {
  std::string matches;
  std::string poses;
  std::string camera;
  std::string mount;
  std::vector<std::string> pair;
  std::optional<double> plane;
  double scene_altitude = 0.0;
};

struct OutputOptions {
  std::string mask;
  std::string report;
  std::string histograms;
  bool timings = false;
};

void AddInputFlags(CLI::App* app, InputOptions* in) {
  app->add_option("--matches", in->matches, "Correspondences: x1 y1 x2 y2")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--poses", in->poses,
                  "Navigation records: image_id X Y Z omega phi kappa")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--camera", in->camera,
                  "Intrinsics: f cx cy k1 k2 k3 p1 p2 width height")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--mount", in->mount,
                  "Mount angles: pitch roll yaw tx ty tz (default nadir)")
      ->check(CLI::ExistingFile);
  app->add_option("--pair", in->pair,
                  "Image ids of the two views (default: first two records)")
      ->expected(2);
  app->add_option("--plane", in->plane, "Projection plane elevation, meters");
  app->add_option("--scene-altitude", in->scene_altitude,
                  "Mean scene altitude; the plane defaults to 100 m below it");
}

void AddOutputFlags(CLI::App* app, OutputOptions* out) {
  app->add_option("--mask", out->mask, "Output mask, one 0/1 per match")
      ->required();
  app->add_option("--report", out->report, "Output JSON report");
  app->add_option("--histograms", out->histograms,
                  "Prefix for voting histogram dumps");
  app->add_flag("--timings", out->timings, "Include timings in the report");
}

void AddHmccFlags(CLI::App* app, HmccConfig* c) {
  app->add_option("--dir-bin", c->dir_bin_width, "Direction bin width, deg")
      ->capture_default_str();
  app->add_option("--dir-radius", c->dir_peak_radius,
                  "Direction neighbor bins around the peak")
      ->capture_default_str();
  app->add_option("--dir-fraction", c->dir_peak_fraction,
                  "Direction neighbor threshold, fraction of peak")
      ->capture_default_str();
  app->add_option("--dc-range", c->dc_range, "Direction-change range, deg")
      ->capture_default_str();
  app->add_option("--dc-bin", c->dc_bin_width, "Direction-change bin, deg")
      ->capture_default_str();
  app->add_option("--dc-radius", c->dc_peak_radius,
                  "Direction-change neighbor bins around the peak")
      ->capture_default_str();
  app->add_option("--dc-fraction", c->dc_peak_fraction,
                  "Direction-change neighbor threshold, fraction of peak")
      ->capture_default_str();
  app->add_option("--knn", c->k_neighbors, "Neighbors per motion")
      ->capture_default_str();
  app->add_option("--zscore", c->zscore_threshold, "Length z-score cutoff")
      ->capture_default_str();
}

void AddRansacFlags(CLI::App* app, RansacConfig* c) {
  app->add_option("--max-residual", c->max_residual,
                  "Inlier threshold, Sampson distance in pixels")
      ->capture_default_str();
  app->add_option("--confidence", c->confidence, "Adaptive stop confidence")
      ->capture_default_str();
  app->add_option("--max-iterations", c->max_iterations, "Iteration cap")
      ->capture_default_str();
}

void AddSceneFlags(CLI::App* app, SceneSpec* s, bool* oblique) {
  app->add_option("--inliers", s->n_inliers, "Inliers per pair")
      ->capture_default_str();
  app->add_option("--outlier-ratio", s->outlier_ratio,
                  "Outlier fraction in [0, 1)")
      ->capture_default_str();
  app->add_option("--height", s->flight_height, "Flight height, meters")
      ->capture_default_str();
  app->add_option("--relief", s->terrain_relief_sigma,
                  "Terrain relief sigma, meters")
      ->capture_default_str();
  app->add_option("--pitch", s->mount_pitch, "Camera mount pitch, degrees")
      ->capture_default_str();
  app->add_flag("--oblique", *oblique, "Shorthand for --pitch 45");
  app->add_option("--position-sigma", s->pose_noise.position_sigma,
                  "Navigation position noise, meters")
      ->capture_default_str();
  app->add_option("--angle-sigma", s->pose_noise.angle_sigma,
                  "Navigation angle noise, degrees")
      ->capture_default_str();
  app->add_option("--pixel-sigma", s->pixel_noise_sigma,
                  "Pixel noise sigma")
      ->capture_default_str();
  app->add_option("--heading", s->heading,
                  "Flight line azimuth from +Y toward +X, degrees")
      ->capture_default_str();
  app->add_option("--baseline", s->baseline, "Exposure spacing, meters")
      ->capture_default_str();
}

StereoGeometry LoadGeometry(const InputOptions& in) {
  const CameraIntrinsics camera = io::ReadCamera(in.camera);
  const MountAngles mount = in.mount.empty() ? MountAngles{} : io::ReadMount(in.mount);
  const std::vector<io::PoseEntry> poses = io::ReadPoses(in.poses);

  std::array<const io::PoseEntry*, 2> chosen{};
  if (in.pair.empty()) {
    if (poses.size() < 2) throw io::ParseError("pose", "need two records");
    chosen = {&poses[0], &poses[1]};
  } else {
    for (int k = 0; k < 2; ++k) {
      for (const io::PoseEntry& e : poses) {
        if (e.image_id == in.pair[k]) chosen[k] = &e;
      }
      if (!chosen[k]) {
        throw io::ParseError("pose", "no record for image '" + in.pair[k] + "'");
      }
    }
  }
  const MountCalibration calibration = mount.ToCalibration();
  StereoGeometry g;
  g.intrinsics1 = camera;
  g.intrinsics2 = camera;
  g.pose1 = ComposeCameraPose(chosen[0]->navigation.ToPlatformPose(), calibration);
  g.pose2 = ComposeCameraPose(chosen[1]->navigation.ToPlatformPose(), calibration);
  g.plane = in.plane ? ProjectionPlane{*in.plane}
                     : DefaultProjectionPlane(in.scene_altitude);
  return g;
}

void WriteJson(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void WriteHistograms(const std::string& prefix, const HmccResult& hmcc) {
  if (prefix.empty()) return;
  if (hmcc.direction.accumulator) {
    io::WriteHistogram(prefix + ".direction.txt", *hmcc.direction.accumulator);
  }
  if (hmcc.direction_change.accumulator) {
    io::WriteHistogram(prefix + ".direction_change.txt",
                       *hmcc.direction_change.accumulator);
  }
}

void WarnOutOfFrame(const StageStats& stats) {
  if (stats.out_of_frame > 0) {
    std::cerr << "warning: " << stats.out_of_frame
              << " match points lie outside the image frame\n";
  }
  if (stats.dropped > 0) {
    std::cerr << "warning: " << stats.dropped
              << " matches have rays that miss the projection plane\n";
  }
}

int CmdVerify(const InputOptions& in, const OutputOptions& out,
              const HmccConfig& hmcc, const RansacConfig& ransac,
              bool fallback_plain) {
  hmcc.Validate();
  ransac.Validate();
  const StereoGeometry geometry = LoadGeometry(in);
  const std::vector<Correspondence> matches = io::ReadMatches(in.matches);

  VerificationReport report = HmccRansac(matches, geometry, hmcc, ransac);
  WarnOutOfFrame(report.stats);
  bool fell_back = false;
  if (!report.verified() && fallback_plain) {
    std::optional<HmccResult> filter = report.filter;
    const StageStats filter_stats = report.stats;
    report = PlainRansac(matches, geometry, ransac);
    report.filter = std::move(filter);
    report.stats.after_direction = filter_stats.after_direction;
    report.stats.after_direction_change = filter_stats.after_direction_change;
    report.stats.after_length = filter_stats.after_length;
    report.stats.dropped = filter_stats.dropped;
    report.stats.out_of_frame = filter_stats.out_of_frame;
    report.stats.filter_seconds = filter_stats.filter_seconds;
    report.stats.verify_seconds += filter_stats.verify_seconds;
    fell_back = true;
  }

  std::vector<bool> mask = report.inlier_mask;
  if (!report.verified()) mask.assign(matches.size(), false);
  io::WriteFlags(out.mask, mask);
  if (!out.report.empty()) {
    nlohmann::ordered_json j = io::ReportToJson(report, out.timings);
    j["fallback_plain"] = fell_back;
    WriteJson(out.report, j);
  }
  if (report.filter) WriteHistograms(out.histograms, *report.filter);
  if (!report.verified()) {
    std::cerr << "failed to verify: " << report.stats.ransac_input
              << " matches reached RANSAC, " << report.num_inliers()
              << " inliers\n";
    return kFailedToVerify;
  }
  return kOk;
}

int CmdFilterOnly(const InputOptions& in, const OutputOptions& out,
                  const HmccConfig& hmcc) {
  hmcc.Validate();
  const StereoGeometry geometry = LoadGeometry(in);
  const std::vector<Correspondence> matches = io::ReadMatches(in.matches);
  const FilterOutcome outcome = RunHmccFilter(matches, geometry, hmcc);
  WarnOutOfFrame(outcome.stats);
  io::WriteFlags(out.mask, outcome.survivor_mask);
  if (!out.report.empty()) {
    WriteJson(out.report, io::FilterToJson(outcome, out.timings));
  }
  WriteHistograms(out.histograms, outcome.hmcc);
  return kOk;
}

std::string PairDirName(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "pair_%03zu", index + 1);
  return buf;
}

std::string RatioDirName(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ratio_%.1f", ratio);
  return buf;
}

constexpr int kSweepSteps = 9;  // outlier ratios 0.1 .. 0.9

double SweepRatio(int step) { return 0.1 * (step + 1); }

void WritePairs(const fs::path& dir, SceneSpec spec, std::size_t pairs) {
  const std::uint64_t base = spec.seed;
  for (std::size_t i = 0; i < pairs; ++i) {
    spec.seed = base + i;
    const fs::path target = pairs == 1 ? dir : dir / PairDirName(i);
    io::WriteLabeledMatchSet(target, GenerateScene(spec));
  }
}

int CmdSynth(const std::string& out_dir, SceneSpec spec, bool oblique,
             std::size_t pairs, bool sweep) {
  if (oblique) spec.mount_pitch = 45.0;
  if (pairs == 0) throw InvalidConfig("--pairs must be positive");
  spec.Validate();
  if (!sweep) {
    WritePairs(out_dir, spec, pairs);
    return kOk;
  }
  for (int step = 0; step < kSweepSteps; ++step) {
    SceneSpec s = spec;
    s.outlier_ratio = SweepRatio(step);
    s.Validate();
    WritePairs(fs::path(out_dir) / RatioDirName(s.outlier_ratio), s, pairs);
  }
  return kOk;
}

struct BenchCli {
  std::vector<std::string> data;
  std::size_t pairs = 4;
  SceneSpec scene;
  bool oblique = false;
  std::uint64_t seed = 0;
  std::vector<std::string> methods;
  std::optional<double> plane;
  double scene_altitude = 0.0;
  std::string table;
  std::string json;
  bool counts_only = false;
  bool parallel = false;
  bool sweep = false;
};

std::vector<LabeledMatchSet> GeneratePairs(SceneSpec spec, std::size_t pairs,
                                           std::uint64_t seed) {
  std::vector<LabeledMatchSet> sets;
  for (std::size_t i = 0; i < pairs; ++i) {
    spec.seed = seed + i;
    sets.push_back(GenerateScene(spec));
  }
  return sets;
}

std::string FormatSweepTable(const BenchCli& b, const BenchOptions& options) {
  std::ostringstream out;
  out << "outlier_ratio\tpairs\tprecision\trecall\tsurvival_precision\tfailed\n";
  for (int step = 0; step < kSweepSteps; ++step) {
    SceneSpec spec = b.scene;
    spec.outlier_ratio = SweepRatio(step);
    const auto sets = GeneratePairs(spec, b.pairs, b.seed);
    double precision = 0.0, recall = 0.0, survival = 0.0;
    std::size_t failed = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      RansacConfig ransac = options.ransac;
      ransac.rng_seed = b.seed + i;
      const VerificationReport r = HmccRansac(
          sets[i].correspondences, sets[i].NoisyGeometry(options.plane),
          options.hmcc, ransac);
      const std::vector<bool> mask =
          r.verified() ? r.inlier_mask
                       : std::vector<bool>(sets[i].labels.size(), false);
      const PrecisionRecall pr = ComputePrecisionRecall(mask, sets[i].labels);
      precision += pr.precision;
      recall += pr.recall;
      survival += SurvivalPrecision(r.verified() ? r.num_inliers() : 0,
                                    r.stats.after_length);
      if (!r.verified()) ++failed;
    }
    const double n = static_cast<double>(sets.size());
    char ratio[16];
    std::snprintf(ratio, sizeof(ratio), "%.1f", spec.outlier_ratio);
    out << ratio << '\t' << sets.size() << '\t'
        << io::FormatDouble(precision / n) << '\t'
        << io::FormatDouble(recall / n) << '\t'
        << io::FormatDouble(survival / n) << '\t' << failed << '\n';
  }
  return out.str();
}

int CmdBench(BenchCli b, const HmccConfig& hmcc, const RansacConfig& ransac) {
  if (b.oblique) b.scene.mount_pitch = 45.0;
  BenchOptions options;
  options.hmcc = hmcc;
  options.ransac = ransac;
  options.ransac.rng_seed = b.seed;
  options.parallel = b.parallel;
  options.plane = b.plane ? ProjectionPlane{*b.plane}
                          : DefaultProjectionPlane(b.scene_altitude);
  hmcc.Validate();
  options.ransac.Validate();
  if (!b.methods.empty()) {
    options.methods.clear();
    for (const std::string& m : b.methods) {
      if (m == "plain") {
        options.methods.push_back(Method::kPlainRansac);
      } else if (m == "pairwise") {
        options.methods.push_back(Method::kPairwiseRansac);
      } else if (m == "hmcc") {
        options.methods.push_back(Method::kHmccRansac);
      } else {
        throw InvalidConfig("unknown method '" + m + "'");
      }
    }
  }
  if (b.data.empty()) {
    if (b.pairs == 0) throw InvalidConfig("--pairs must be positive");
    b.scene.seed = b.seed;
    b.scene.Validate();
  }

  if (b.sweep) {
    if (!b.data.empty()) throw InvalidConfig("--sweep generates its own pairs");
    WriteText(b.table, FormatSweepTable(b, options));
    return kOk;
  }

  std::vector<LabeledMatchSet> sets;
  if (b.data.empty()) {
    sets = GeneratePairs(b.scene, b.pairs, b.seed);
  } else {
    for (const std::string& dir : b.data) {
      sets.push_back(io::ReadLabeledMatchSet(dir));
    }
  }
  const bool counts_only = b.counts_only || b.parallel;
  const BenchReport report = RunBenchmark(sets, options);
  WriteText(b.table, FormatBenchTable(report, counts_only));
  if (!b.json.empty()) WriteJson(b.json, io::BenchToJson(report, counts_only));
  return kOk;
}

}  // namespace

int Run(const std::vector<std::string>& args) {
  CLI::App app{"Geometric verification of UAV image matches with HMCC-RANSAC"};
  app.require_subcommand(1);

  InputOptions in;
  OutputOptions out;
  HmccConfig hmcc;
  RansacConfig ransac;
  bool fallback_plain = false;

  auto* verify = app.add_subcommand(
      "verify", "Filter matches with HMCC, then run RANSAC on the survivors");
  AddInputFlags(verify, &in);
  AddOutputFlags(verify, &out);
  AddHmccFlags(verify, &hmcc);
  AddRansacFlags(verify, &ransac);
  verify->add_option("--seed", ransac.rng_seed, "RANSAC seed")
      ->capture_default_str();
  verify->add_flag("--fallback-plain", fallback_plain,
                   "Retry with plain RANSAC if the filtered set fails");

  auto* filter = app.add_subcommand(
      "filter-only", "Write the HMCC survivor mask without RANSAC");
  AddInputFlags(filter, &in);
  AddOutputFlags(filter, &out);
  AddHmccFlags(filter, &hmcc);

  std::string synth_dir;
  SceneSpec scene;
  bool oblique = false;
  std::size_t synth_pairs = 1;
  bool synth_sweep = false;
  auto* synth = app.add_subcommand("synth", "Generate labeled synthetic pairs");
  synth->add_option("--out", synth_dir, "Output directory")->required();
  AddSceneFlags(synth, &scene, &oblique);
  synth->add_option("--seed", scene.seed, "Scene seed; pair i uses seed + i")
      ->capture_default_str();
  synth->add_option("--pairs", synth_pairs, "Pairs per outlier ratio")
      ->capture_default_str();
  synth->add_flag("--sweep", synth_sweep,
                  "One dataset per outlier ratio 0.1 .. 0.9");

  BenchCli bench_cli;
  auto* bench = app.add_subcommand(
      "bench", "Compare plain, pairwise-filtered and HMCC-filtered RANSAC");
  bench->add_option("--data", bench_cli.data,
                    "Directories written by synth (default: generate pairs)")
      ->check(CLI::ExistingDirectory);
  bench->add_option("--pairs", bench_cli.pairs, "Pairs to generate")
      ->capture_default_str();
  AddSceneFlags(bench, &bench_cli.scene, &bench_cli.oblique);
  bench->add_option("--seed", bench_cli.seed,
                    "Pair i uses seed + i for the scene and RANSAC")
      ->capture_default_str();
  bench->add_option("--methods", bench_cli.methods,
                    "Subset of plain, pairwise, hmcc")
      ->delimiter(',');
  bench->add_option("--plane", bench_cli.plane, "Projection plane elevation");
  bench->add_option("--scene-altitude", bench_cli.scene_altitude,
                    "Mean scene altitude; the plane defaults to 100 m below it");
  bench->add_option("--table", bench_cli.table,
                    "Tab-separated table output (default stdout)");
  bench->add_option("--json", bench_cli.json, "JSON report output");
  bench->add_flag("--counts-only", bench_cli.counts_only,
                  "Omit time columns so output is reproducible");
  bench->add_flag("--parallel", bench_cli.parallel,
                  "Run pairs concurrently (implies --counts-only)");
  bench->add_flag("--sweep", bench_cli.sweep,
                  "Precision/recall of HMCC-RANSAC over outlier ratios 0.1 .. 0.9");
  AddHmccFlags(bench, &hmcc);
  AddRansacFlags(bench, &ransac);

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*verify) return CmdVerify(in, out, hmcc, ransac, fallback_plain);
    if (*filter) return CmdFilterOnly(in, out, hmcc);
    if (*synth) {
      return CmdSynth(synth_dir, scene, oblique, synth_pairs, synth_sweep);
    }
    if (*bench) return CmdBench(bench_cli, hmcc, ransac);
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidConfig& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidPose& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace uavmatch::cli
