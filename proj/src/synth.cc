#include "uavmatch/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "uavmatch/accumulator.h"

namespace uavmatch {
namespace {

constexpr std::size_t kAttemptsPerPoint = 1000;

double Gaussian(std::mt19937_64& rng, double sigma) {
  if (sigma == 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

Vec2 UniformPixel(std::mt19937_64& rng, const CameraIntrinsics& in) {
  std::uniform_real_distribution<double> ux(0.0, in.width);
  std::uniform_real_distribution<double> uy(0.0, in.height);
  const double x = ux(rng);
  const double y = uy(rng);
  return {x, y};
}

NavigationRecord Perturb(const NavigationRecord& nav, const PoseNoise& noise,
                         std::mt19937_64& rng) {
  NavigationRecord out = nav;
  for (int i = 0; i < 3; ++i) {
    out.position[i] += Gaussian(rng, noise.position_sigma);
  }
  out.omega += Gaussian(rng, noise.angle_sigma);
  out.phi += Gaussian(rng, noise.angle_sigma);
  out.kappa += Gaussian(rng, noise.angle_sigma);
  return out;
}

}  // namespace

CameraIntrinsics SonyIlce7rIntrinsics() {
  CameraIntrinsics in;
  in.width = 7360;
  in.height = 4912;
  in.focal_length = 35.0 / (35.9 / 7360.0);
  in.principal_point = Vec2(3680.0, 2456.0);
  return in;
}

void SceneSpec::Validate() const {
  if (n_inliers == 0) throw InvalidConfig("n_inliers must be positive");
  if (!(outlier_ratio >= 0.0 && outlier_ratio < 1.0)) {
    throw InvalidConfig("outlier_ratio must lie in [0, 1)");
  }
  if (!std::isfinite(heading)) throw InvalidConfig("heading must be finite");
  if (!(flight_height > 0.0)) {
    throw InvalidConfig("flight_height must be positive");
  }
  if (!(terrain_relief_sigma >= 0.0) || !(pose_noise.position_sigma >= 0.0) ||
      !(pose_noise.angle_sigma >= 0.0) || !(pixel_noise_sigma >= 0.0)) {
    throw InvalidConfig("noise sigmas must be non-negative");
  }
  camera.Validate();
}

std::size_t LabeledMatchSet::num_inliers() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
}

StereoGeometry LabeledMatchSet::NoisyGeometry(
    const ProjectionPlane& plane) const {
  return {intrinsics, intrinsics, noisy_poses[0], noisy_poses[1], plane};
}

StereoGeometry LabeledMatchSet::TrueGeometry(const ProjectionPlane& plane) const {
  return {intrinsics, intrinsics, true_poses[0], true_poses[1], plane};
}

std::size_t OutlierCount(std::size_t n_inliers, double outlier_ratio) {
  const double exact = static_cast<double>(n_inliers) * outlier_ratio /
                       (1.0 - outlier_ratio);
  // Absorb representation error so 204 * 0.5 / 0.5 stays 204.
  return static_cast<std::size_t>(std::ceil(exact - 1e-9));
}

ProjectionPlane DefaultProjectionPlane(double scene_mean_altitude) {
  return {scene_mean_altitude - 100.0};
}

LabeledMatchSet GenerateScene(const SceneSpec& spec) {
  spec.Validate();
  std::mt19937_64 rng(spec.seed);

  LabeledMatchSet set;
  set.intrinsics = spec.camera;
  set.mount.pitch = spec.mount_pitch;
  set.true_navigation[0].position = Vec3(0.0, 0.0, spec.flight_height);
  const double heading = spec.heading * std::numbers::pi / 180.0;
  set.true_navigation[1].position =
      Vec3(spec.baseline * std::sin(heading), spec.baseline * std::cos(heading),
           spec.flight_height);
  const MountCalibration mount = set.mount.ToCalibration();
  for (int i = 0; i < 2; ++i) {
    set.true_poses[i] =
        ComposeCameraPose(set.true_navigation[i].ToPlatformPose(), mount);
  }
  set.ground_truth_f = FundamentalFromPoses(set.intrinsics, set.true_poses[0],
                                            set.intrinsics, set.true_poses[1]);

  std::vector<Correspondence> exact;
  exact.reserve(spec.n_inliers);
  std::size_t attempts = 0;
  while (exact.size() < spec.n_inliers) {
    if (++attempts > kAttemptsPerPoint * spec.n_inliers) {
      throw SceneGenerationError("no ground points visible in both cameras");
    }
    const Vec2 p1 = UniformPixel(rng, set.intrinsics);
    const double height = Gaussian(rng, spec.terrain_relief_sigma);
    const auto ground =
        ProjectToPlane(p1, set.intrinsics, set.true_poses[0], {height});
    if (!ground) continue;
    const Vec3 world(ground->x(), ground->y(), height);
    const auto p2 = ProjectToImage(world, set.intrinsics, set.true_poses[1]);
    if (!p2 || !set.intrinsics.Contains(*p2)) continue;
    exact.push_back({p1, *p2, 0});
  }

  struct Item {
    Correspondence noisy;
    Correspondence clean;
    bool inlier;
  };
  std::vector<Item> items;
  const std::size_t n_outliers = OutlierCount(spec.n_inliers, spec.outlier_ratio);
  items.reserve(exact.size() + n_outliers);
  for (const Correspondence& c : exact) {
    // One draw per statement: argument evaluation order is unspecified.
    Correspondence noisy = c;
    noisy.p1.x() += Gaussian(rng, spec.pixel_noise_sigma);
    noisy.p1.y() += Gaussian(rng, spec.pixel_noise_sigma);
    noisy.p2.x() += Gaussian(rng, spec.pixel_noise_sigma);
    noisy.p2.y() += Gaussian(rng, spec.pixel_noise_sigma);
    items.push_back({noisy, c, true});
  }
  for (std::size_t i = 0; i < n_outliers; ++i) {
    const Vec2 p1 = UniformPixel(rng, set.intrinsics);
    const Vec2 p2 = UniformPixel(rng, set.intrinsics);
    items.push_back({{p1, p2, 0}, {p1, p2, 0}, false});
  }
  std::shuffle(items.begin(), items.end(), rng);

  set.correspondences.reserve(items.size());
  set.noise_free.reserve(items.size());
  set.labels.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    items[i].noisy.id = i;
    items[i].clean.id = i;
    set.correspondences.push_back(items[i].noisy);
    set.noise_free.push_back(items[i].clean);
    set.labels.push_back(items[i].inlier);
  }

  for (int i = 0; i < 2; ++i) {
    set.noisy_navigation[i] = Perturb(set.true_navigation[i], spec.pose_noise, rng);
    set.noisy_poses[i] =
        ComposeCameraPose(set.noisy_navigation[i].ToPlatformPose(), mount);
  }
  return set;
}

PrecisionRecall ComputePrecisionRecall(const std::vector<bool>& mask,
                                       const std::vector<bool>& labels) {
  if (mask.size() != labels.size()) {
    throw std::invalid_argument("mask and labels differ in length");
  }
  std::size_t predicted = 0, positives = 0, hits = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    predicted += mask[i];
    positives += labels[i];
    hits += mask[i] && labels[i];
  }
  PrecisionRecall pr;
  if (predicted == 0) {
    pr.precision = 1.0;
    pr.precision_undefined = true;
  } else {
    pr.precision = static_cast<double>(hits) / static_cast<double>(predicted);
  }
  pr.recall = positives == 0
                  ? 1.0
                  : static_cast<double>(hits) / static_cast<double>(positives);
  return pr;
}

double SurvivalPrecision(std::size_t ransac_inliers,
                         std::size_t filter_survivors) {
  if (filter_survivors == 0) return 1.0;
  return static_cast<double>(ransac_inliers) /
         static_cast<double>(filter_survivors);
}

}  // namespace uavmatch
