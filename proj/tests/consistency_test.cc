#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "support/generators.h"
#include "support/oracle.h"
#include "uavmatch/consistency.h"
#include "uavmatch/synth.h"
#include "uavmatch/pipeline.h"

using namespace uavmatch;

namespace {

std::set<std::size_t> AsSet(const std::vector<std::size_t>& ids) {
  return {ids.begin(), ids.end()};
}

std::vector<Motion> Rotated(std::vector<Motion> motions, double degrees) {
  for (Motion& m : motions) {
    if (!m.degenerate) m.direction = gen::GridAngle(m.direction + degrees);
  }
  return motions;
}

// Parallel field on a grid: one motion per cell, all pointing along 40 deg.
std::vector<Motion> ParallelField(int side, double direction = 40.0) {
  std::vector<Motion> out;
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      out.push_back(gen::MotionAt(Vec2(x * 10.0, y * 10.0), direction, 20.0,
                                  out.size()));
    }
  }
  return out;
}

void CheckPartition(const StageOutcome& s, const std::vector<Motion>& input) {
  std::vector<std::size_t> all = s.survivors;
  all.insert(all.end(), s.rejected.begin(), s.rejected.end());
  all.insert(all.end(), s.passthrough.begin(), s.passthrough.end());
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> ids;
  for (const Motion& m : input) ids.push_back(m.source_id);
  std::sort(ids.begin(), ids.end());
  CHECK(all == ids);
}

}  // namespace

TEST_CASE("config validation") {
  HmccConfig cfg;
  CHECK_NOTHROW(cfg.Validate());
  cfg.dir_bin_width = 7.0;
  CHECK_THROWS_AS(cfg.Validate(), InvalidConfig);
  cfg = {};
  cfg.dc_bin_width = 4.0;
  CHECK_THROWS_AS(cfg.Validate(), InvalidConfig);
  cfg = {};
  cfg.k_neighbors = 0;
  CHECK_THROWS_AS(cfg.Validate(), InvalidConfig);
  cfg = {};
  cfg.zscore_threshold = -1.0;
  CHECK_THROWS_AS(cfg.Validate(), InvalidConfig);
  cfg = {};
  cfg.dir_bin_width = 20.0;  // the coarser interval is also a valid tiling
  CHECK_NOTHROW(cfg.Validate());
}

TEST_CASE("direction change") {
  CHECK(DirectionChange(10, 40) == 30.0);
  CHECK(DirectionChange(123.5, 123.5) == 0.0);
  CHECK(DirectionChange(359, 1) == doctest::Approx(2.0));
  CHECK(DirectionChange(1, 359) == doctest::Approx(2.0));
  CHECK(DirectionChange(0, 180) == 180.0);
}

TEST_CASE("global direction vote") {
  const HmccConfig cfg;
  SUBCASE("single direction") {
    std::vector<Motion> motions;
    for (std::size_t i = 0; i < 10; ++i) {
      motions.push_back(gen::MotionAt(Vec2(i, 0), 45.0, 5.0, i));
    }
    const StageOutcome s = GlobalDirectionVote(motions, cfg);
    CHECK(s.survivors.size() == 10);
    CHECK(*s.peak_bin == 4);
    CHECK(s.selected_bins == std::vector<std::size_t>{4});
  }
  SUBCASE("outliers outside the window are rejected") {
    gen::Rng rng(41);
    std::vector<Motion> motions;
    for (std::size_t i = 0; i < 90; ++i) {
      motions.push_back(gen::MotionAt(Vec2(i, 0), gen::Uniform(rng, 40, 50), 5.0, i));
    }
    std::set<std::size_t> outliers;
    for (std::size_t i = 90; i < 100; ++i) {
      motions.push_back(gen::MotionAt(Vec2(i, 0), gen::Uniform(rng, 95, 355), 5.0, i));
      outliers.insert(i);
    }
    const StageOutcome s = GlobalDirectionVote(motions, cfg);
    CHECK(AsSet(s.rejected) == outliers);
    CHECK(AsSet(s.survivors) == oracle::DirectionStage(motions).survivors);
  }
  SUBCASE("degenerate motions pass through") {
    std::vector<Motion> motions = ParallelField(3);
    Motion still;
    still.degenerate = true;
    still.source_id = 100;
    motions.insert(motions.begin() + 4, still);
    const StageOutcome s = GlobalDirectionVote(motions, cfg);
    CHECK(s.passthrough == std::vector<std::size_t>{100});
    CHECK(s.kept.size() == motions.size());
    CHECK(s.kept[4] == 100);
    CheckPartition(s, motions);
  }
  SUBCASE("empty input") {
    const StageOutcome s = GlobalDirectionVote({}, cfg);
    CHECK(s.kept.empty());
    CHECK(s.skipped);
  }
}

TEST_CASE("local direction-change vote") {
  const HmccConfig cfg;
  SUBCASE("parallel field") {
    const auto motions = ParallelField(6);
    const StageOutcome s = LocalDirectionChangeVote(motions, cfg);
    CHECK(*s.peak_bin == 0);
    CHECK(s.accumulator->counts()[0] == 7 * motions.size());
  }
  SUBCASE("a perpendicular motion in a parallel field") {
    auto motions = ParallelField(6);
    motions[14].direction = 130.0;
    const StageOutcome s = LocalDirectionChangeVote(motions, cfg);
    CHECK(s.rejected == std::vector<std::size_t>{14});
  }
  SUBCASE("a lone motion cannot be judged") {
    const std::vector<Motion> one{gen::MotionAt(Vec2(0, 0), 10.0, 1.0, 3)};
    const StageOutcome s = LocalDirectionChangeVote(one, cfg);
    CHECK(s.passthrough == std::vector<std::size_t>{3});
    CHECK(s.skipped);
  }
  SUBCASE("noisy parallel field votes mostly in the first bin") {
    gen::Rng rng(42);
    std::vector<Motion> motions;
    for (std::size_t i = 0; i < 300; ++i) {
      motions.push_back(gen::MotionAt(
          Vec2(gen::Uniform(rng, 0, 500), gen::Uniform(rng, 0, 500)),
          gen::GridAngle(200.0 + gen::Normal(rng, 1.0)), 10.0, i));
    }
    const StageOutcome s = LocalDirectionChangeVote(motions, cfg);
    const auto& counts = s.accumulator->counts();
    CHECK(2 * counts[0] > s.accumulator->total_votes());
  }
}

TEST_CASE("length z-score") {
  SUBCASE("equal lengths all pass") {
    const auto motions = ParallelField(4);
    const StageOutcome s = LengthZscoreFilter(motions, 3.0);
    CHECK(s.skipped);
  }
  SUBCASE("one long motion") {
    std::vector<Motion> motions;
    for (int i = 0; i < 30; ++i) motions.push_back(gen::MotionAt({0, 0}, 0, 10.0, motions.size()));
    for (int i = 0; i < 30; ++i) motions.push_back(gen::MotionAt({0, 0}, 0, 10.1, motions.size()));
    motions.push_back(gen::MotionAt({0, 0}, 0, 500.0, motions.size()));
    // Population statistics by hand.
    double mean = (30 * 10.0 + 30 * 10.1 + 500.0) / 61.0;
    double var = (30 * std::pow(10.0 - mean, 2) + 30 * std::pow(10.1 - mean, 2) +
                  std::pow(500.0 - mean, 2)) / 61.0;
    CHECK((500.0 - mean) / std::sqrt(var) == doctest::Approx(7.7).epsilon(0.01));
    const StageOutcome s = LengthZscoreFilter(motions, 3.0);
    CHECK(s.rejected == std::vector<std::size_t>{60});
    CHECK(s.survivors.size() == 60);
  }
  SUBCASE("fewer than two motions") {
    const std::vector<Motion> one{gen::MotionAt({0, 0}, 0, 3.0, 0)};
    CHECK(LengthZscoreFilter(one, 3.0).survivors.size() == 1);
    CHECK(LengthZscoreFilter({}, 3.0).kept.empty());
  }
}

TEST_CASE("full filter on simple inputs") {
  const HmccConfig cfg;
  const auto motions = ParallelField(5);
  const HmccResult r = HmccFilter(motions, cfg);
  CHECK(r.reduced_ids.size() == motions.size());
  CHECK(HmccFilter({}, cfg).reduced_ids.empty());
}

TEST_CASE("stages agree with the literal oracle") {
  const HmccConfig cfg;
  gen::Rng rng(43);
  for (int trial = 0; trial < 150; ++trial) {
    const auto motions = gen::MotionField(rng, gen::UniformInt(rng, 0, 200));
    const HmccResult r = HmccFilter(motions, cfg);

    const oracle::Stage s1 = oracle::DirectionStage(motions);
    CHECK(AsSet(r.direction.survivors) == s1.survivors);
    CHECK(AsSet(r.direction.rejected) == s1.rejected);
    CHECK(AsSet(r.direction.passthrough) == s1.passthrough);

    const auto m1 = oracle::Keep(motions, s1.KeptInOrder(motions));
    const oracle::Stage s2 = oracle::DirectionChangeStage(m1);
    CHECK(AsSet(r.direction_change.survivors) == s2.survivors);
    CHECK(AsSet(r.direction_change.rejected) == s2.rejected);

    const auto m2 = oracle::Keep(m1, s2.KeptInOrder(m1));
    const oracle::Stage s3 = oracle::LengthStage(m2);
    CHECK(AsSet(r.length.survivors) == s3.survivors);
    CHECK(AsSet(r.reduced_ids) == s3.survivors);

    // Partition, monotonicity and order.
    CheckPartition(r.direction, motions);
    CheckPartition(r.direction_change, m1);
    const auto kept1 = AsSet(r.direction.kept);
    for (std::size_t id : r.direction_change.kept) CHECK(kept1.count(id) == 1);
    CHECK(std::is_sorted(r.reduced_ids.begin(), r.reduced_ids.end()));
  }
}

TEST_CASE("determinism") {
  gen::Rng rng(44);
  const auto motions = gen::MotionField(rng, 200);
  const HmccResult a = HmccFilter(motions, HmccConfig{});
  const HmccResult b = HmccFilter(motions, HmccConfig{});
  CHECK(a.reduced_ids == b.reduced_ids);
  CHECK(a.direction.accumulator->counts() == b.direction.accumulator->counts());
}

TEST_CASE("invariances") {
  const HmccConfig cfg;
  gen::Rng rng(45);
  for (int trial = 0; trial < 100; ++trial) {
    const auto motions = gen::MotionField(rng, gen::UniformInt(rng, 2, 200));

    {  // direction vote under rotation by whole bins
      const StageOutcome base = GlobalDirectionVote(motions, cfg);
      const int steps = gen::UniformInt(rng, 1, 35);
      const StageOutcome turned =
          GlobalDirectionVote(Rotated(motions, 10.0 * steps), cfg);
      CHECK(turned.survivors == base.survivors);
      const auto& counts = base.accumulator->counts();
      if (std::count(counts.begin(), counts.end(), counts[*base.peak_bin]) == 1) {
        CHECK((*base.peak_bin + steps) % 36 == *turned.peak_bin);
      }
    }
    {  // direction-change vote under any rotation
      const StageOutcome base = LocalDirectionChangeVote(motions, cfg);
      const double angle = gen::GridAngle(gen::Uniform(rng, 0.0, 360.0));
      const StageOutcome turned =
          LocalDirectionChangeVote(Rotated(motions, angle), cfg);
      CHECK(turned.survivors == base.survivors);
      CHECK(turned.accumulator->counts() == base.accumulator->counts());
    }
    {  // direction-change vote when the whole field turns a quarter
      std::vector<Motion> grid;
      for (std::size_t i = 0; i < motions.size(); ++i) {
        Motion m = motions[i];
        m.start = Vec2(gen::UniformInt(rng, -9, 9), gen::UniformInt(rng, -9, 9));
        grid.push_back(m);
      }
      std::vector<Motion> turned = Rotated(grid, 90.0);
      for (Motion& m : turned) m.start = Vec2(-m.start.y(), m.start.x());
      CHECK(LocalDirectionChangeVote(turned, cfg).survivors ==
            LocalDirectionChangeVote(grid, cfg).survivors);
    }
    {  // length test under uniform scaling
      const StageOutcome base = LengthZscoreFilter(motions, 3.0);
      for (double c : {0.125, 2.0, 1024.0}) {
        std::vector<Motion> scaled = motions;
        for (Motion& m : scaled) m.length *= c;
        CHECK(LengthZscoreFilter(scaled, 3.0).survivors == base.survivors);
      }
    }
  }
}

TEST_CASE("coherent inliers fill few adjacent direction bins") {
  gen::Rng rng(46);
  for (int trial = 0; trial < 100; ++trial) {
    // A spread narrower than one bin touches at most two; under two bins,
    // at most three.
    const double width = trial % 2 ? gen::Uniform(rng, 1.0, 9.9) : gen::Uniform(rng, 10.0, 19.9);
    const std::size_t limit = trial % 2 ? 2 : 3;
    const double center = gen::Uniform(rng, 0, 360);
    std::vector<Motion> motions;
    for (std::size_t i = 0; i < 200; ++i) {
      const double dir = gen::GridAngle(center + gen::Uniform(rng, -width / 2, width / 2));
      motions.push_back(gen::MotionAt(Vec2(i, 0), dir, 5.0, i));
    }
    const StageOutcome s = GlobalDirectionVote(motions, HmccConfig{});
    std::vector<std::size_t> occupied;
    for (std::size_t b : s.selected_bins) {
      if (s.accumulator->counts()[b] > 0) occupied.push_back(b);
    }
    CHECK(occupied.size() <= limit);
    for (std::size_t b : occupied) {
      CHECK(s.accumulator->BinDistance(b, *s.peak_bin) < limit);
    }
  }
}

TEST_CASE("filter on a synthetic scene with many outliers") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SceneSpec spec;
    spec.outlier_ratio = 0.8;
    spec.seed = seed;
    const LabeledMatchSet scene = GenerateScene(spec);
    const FilterOutcome f = RunHmccFilter(
        scene.correspondences, scene.NoisyGeometry(DefaultProjectionPlane(0.0)),
        HmccConfig{});
    std::size_t survivors = 0, inliers = 0;
    for (std::size_t i = 0; i < f.survivor_mask.size(); ++i) {
      if (!f.survivor_mask[i]) continue;
      ++survivors;
      if (scene.labels[i]) ++inliers;
    }
    REQUIRE(survivors > 0);
    CHECK(static_cast<double>(inliers) / survivors >= 0.9);
  }
}
