#include <doctest.h>

#include <cmath>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "support/generators.h"
#include "uavmatch/fundamental.h"

using namespace uavmatch;

TEST_CASE("real cubic roots") {
  auto roots = RealCubicRoots(1, -6, 11, -6);
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(roots[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(roots[2] == doctest::Approx(3.0).epsilon(1e-12));

  roots = RealCubicRoots(1, 0, 1, 0);  // x (x^2 + 1)
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0]) < 1e-12);

  roots = RealCubicRoots(0, 1, -3, 2);  // quadratic (x - 1)(x - 2)
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(1.0));
  CHECK(roots[1] == doctest::Approx(2.0));

  roots = RealCubicRoots(0, 0, 2, -1);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == doctest::Approx(0.5));

  gen::Rng rng(51);
  for (int trial = 0; trial < 500; ++trial) {
    const double r1 = gen::Uniform(rng, -5, 5), r2 = gen::Uniform(rng, -5, 5),
                 r3 = gen::Uniform(rng, -5, 5);
    const double s = gen::Uniform(rng, 0.1, 10);
    // s (x - r1)(x - r2)(x - r3)
    const auto found = RealCubicRoots(s, -s * (r1 + r2 + r3),
                                      s * (r1 * r2 + r1 * r3 + r2 * r3),
                                      -s * r1 * r2 * r3);
    for (double x : found) {
      CHECK(std::abs((x - r1) * (x - r2) * (x - r3)) < 1e-7);
    }
    CHECK(!found.empty());
  }
}

TEST_CASE("canonical scale") {
  Mat3 m;
  m << 0, 0, 0, 0, 0, -4, 0, 3, 0;
  const Mat3 c = CanonicalScale(m);
  CHECK(c.norm() == doctest::Approx(1.0));
  CHECK(c(1, 2) == doctest::Approx(0.8));
  CHECK(c(2, 1) == doctest::Approx(-0.6));
  CHECK((CanonicalScale(-7.0 * m) - c).norm() < 1e-15);
}

TEST_CASE("poses give an F that annihilates exact matches") {
  gen::Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const gen::TwoView v = gen::RandomTwoView(rng);
    for (const Correspondence& c : gen::ExactMatches(rng, v, 20)) {
      CHECK(SampsonDistance(c.p1, c.p2, v.f.matrix()) < 1e-9);
    }
    CHECK(std::abs(v.f.matrix().determinant()) < 1e-12);
  }
}

TEST_CASE("sampson distance") {
  // Rectified pair: epipolar lines are image rows, x2^T F x1 = y1 - y2.
  Mat3 f;
  f << 0, 0, 0, 0, 0, -1, 0, 1, 0;
  SUBCASE("row offset splits between both images") {
    // The closest pair of points on corresponding rows moves each point by
    // half the offset, so the distance in the joint space is 5 / sqrt(2).
    const double d = SampsonDistance({100, 200}, {340, 205}, f);
    CHECK(d == doctest::Approx(5.0 / std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("on the line") {
    CHECK(SampsonDistance({100, 200}, {-50, 200}, f) == 0.0);
  }
  SUBCASE("vanishing gradients") {
    CHECK(std::isinf(SampsonDistance({1, 2}, {3, 4}, Mat3::Zero())));
  }
  SUBCASE("swapping images with the transpose gives the same value") {
    gen::Rng rng(53);
    const gen::TwoView v = gen::RandomTwoView(rng);
    for (int i = 0; i < 100; ++i) {
      const Vec2 a(gen::Uniform(rng, 0, 4000), gen::Uniform(rng, 0, 3000));
      const Vec2 b(gen::Uniform(rng, 0, 4000), gen::Uniform(rng, 0, 3000));
      const double fwd = SampsonDistance(a, b, v.f.matrix());
      const double rev = SampsonDistance(b, a, v.f.matrix().transpose());
      CHECK(std::abs(fwd - rev) <= 1e-12 * std::max(1.0, fwd));
    }
  }
  SUBCASE("small offsets approach the joint-space distance") {
    // Sampson is the first-order distance to the epipolar variety; for a
    // displacement of the image-2 point along the normal of its line, that
    // distance is |n2| / sqrt(|n1|^2 + |n2|^2) times the offset.
    gen::Rng rng(54);
    const gen::TwoView v = gen::RandomTwoView(rng);
    for (const Correspondence& c : gen::ExactMatches(rng, v, 50)) {
      const Mat3& F = v.f.matrix();
      const Vec3 l2 = F * c.p1.homogeneous();
      const Vec3 l1 = F.transpose() * c.p2.homogeneous();
      const Vec2 n2 = l2.head<2>();
      const Vec2 n1 = l1.head<2>();
      const double offset = 0.5;
      const Vec2 moved = c.p2 + offset * n2.normalized();
      const double expected = offset * n2.norm() / std::sqrt(n1.squaredNorm() + n2.squaredNorm());
      CHECK(SampsonDistance(c.p1, moved, F) == doctest::Approx(expected).epsilon(1e-2));
    }
  }
}

TEST_CASE("seven-point solver") {
  gen::Rng rng(55);
  SUBCASE("wrong sample size") {
    const gen::TwoView v = gen::RandomTwoView(rng);
    const auto m = gen::ExactMatches(rng, v, 8);
    CHECK_THROWS_AS(SevenPoint(m), std::invalid_argument);
    CHECK_THROWS_AS(SevenPoint(std::span(m).first(6)), std::invalid_argument);
  }
  SUBCASE("collinear points in image 1 are degenerate") {
    std::vector<Correspondence> m;
    for (int i = 0; i < 7; ++i) {
      m.push_back({Vec2(100.0 + 50 * i, 200.0 + 25 * i),
                   Vec2(gen::Uniform(rng, 0, 1000), gen::Uniform(rng, 0, 1000)),
                   static_cast<std::size_t>(i)});
    }
    CHECK(SevenPoint(m).empty());
  }
  SUBCASE("coincident points are degenerate") {
    std::vector<Correspondence> m(7, Correspondence{{5, 5}, {6, 6}, 0});
    CHECK(SevenPoint(m).empty());
  }
  SUBCASE("exact samples recover the true F") {
    for (int trial = 0; trial < 300; ++trial) {
      const gen::TwoView v = gen::RandomTwoView(rng);
      const auto sample = gen::ExactMatches(rng, v, 7);
      const auto candidates = SevenPoint(sample);
      REQUIRE(!candidates.empty());
      CHECK(candidates.size() <= 3);
      double best = 1e9;
      for (const FundamentalMatrix& f : candidates) {
        best = std::min(best, gen::DistanceUpToScale(f.matrix(), v.f.matrix()));
        CHECK(std::abs(f.matrix().determinant()) < 1e-9);
        CHECK(f.matrix().norm() == doctest::Approx(1.0));
        for (const Correspondence& c : sample) {
          const double r = c.p2.homogeneous().dot(f.matrix() * c.p1.homogeneous());
          CHECK(std::abs(r) < 1e-6);
        }
      }
      CHECK(best < 1e-6);
    }
  }
  SUBCASE("three real roots give three rank-2 candidates") {
    int triples = 0;
    for (int trial = 0; trial < 2000 && triples < 20; ++trial) {
      std::vector<Correspondence> m;
      for (int i = 0; i < 7; ++i) {
        m.push_back({Vec2(gen::Uniform(rng, 0, 1000), gen::Uniform(rng, 0, 1000)),
                     Vec2(gen::Uniform(rng, 0, 1000), gen::Uniform(rng, 0, 1000)),
                     static_cast<std::size_t>(i)});
      }
      const auto candidates = SevenPoint(m);
      if (candidates.size() != 3) continue;
      ++triples;
      for (const FundamentalMatrix& f : candidates) {
        CHECK(std::abs(f.matrix().determinant()) < 1e-9);
        const Vec3 sv = Eigen::JacobiSVD<Mat3>(f.matrix()).singularValues();
        CHECK(sv(2) < 1e-9);
        CHECK(sv(1) > 10.0 * sv(2));
      }
    }
    CHECK(triples > 0);
  }
}
