#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "uavmatch/fundamental.h"
#include "uavmatch/geometry.h"
#include "uavmatch/motion.h"

namespace uavmatch {

class SceneGenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 35 mm lens on a 35.9 x 24.0 mm, 7360 x 4912 px sensor, no distortion.
CameraIntrinsics SonyIlce7rIntrinsics();

struct PoseNoise {
  double position_sigma = 2.0;  // meters, per axis
  double angle_sigma = 1.0;     // degrees, per omega/phi/kappa
};

// Two exposures from the same camera along a straight flight line.
struct SceneSpec {
  std::size_t n_inliers = 204;
  double outlier_ratio = 0.0;  // in [0, 1)
  double flight_height = 300.0;
  double terrain_relief_sigma = 5.0;
  double mount_pitch = 0.0;  // 0 nadir, 45 oblique
  PoseNoise pose_noise;
  double pixel_noise_sigma = 0.5;
  std::uint64_t seed = 0;
  // Distance between the two exposure stations.
  double baseline = 70.0;
  // Flight line azimuth, degrees from world +Y toward +X. Off-axis by
  // default so exact motions do not sit on a direction bin boundary.
  double heading = 15.0;
  CameraIntrinsics camera = SonyIlce7rIntrinsics();

  void Validate() const;
};

struct LabeledMatchSet {
  std::vector<Correspondence> correspondences;  // ids = positions
  std::vector<bool> labels;                     // true = inlier
  // Inlier points before pixel noise (outliers repeat their noisy points).
  std::vector<Correspondence> noise_free;
  CameraIntrinsics intrinsics;
  MountAngles mount;
  std::array<NavigationRecord, 2> true_navigation;
  std::array<NavigationRecord, 2> noisy_navigation;
  std::array<CameraPose, 2> true_poses;
  std::array<CameraPose, 2> noisy_poses;
  FundamentalMatrix ground_truth_f;

  std::size_t num_inliers() const;
  // Geometry for verification from the noisy (navigation-grade) poses.
  StereoGeometry NoisyGeometry(const ProjectionPlane& plane) const;
  StereoGeometry TrueGeometry(const ProjectionPlane& plane) const;
};

// Number of random pairs added to n inliers to reach the outlier ratio.
std::size_t OutlierCount(std::size_t n_inliers, double outlier_ratio);

// Projection plane 100 m below the mean scene altitude.
ProjectionPlane DefaultProjectionPlane(double scene_mean_altitude);

// Ground points with Gaussian relief around Z = 0 seen by both true
// cameras, pixel noise, uniform random outlier pairs, seeded shuffle, and
// navigation poses perturbed by the pose noise. Throws SceneGenerationError
// if visible points cannot be found.
LabeledMatchSet GenerateScene(const SceneSpec& spec);

struct PrecisionRecall {
  double precision = 1.0;
  double recall = 0.0;
  // Empty mask: precision is reported as 1.0.
  bool precision_undefined = false;
};

// precision = |mask & labels| / |mask|, recall = |mask & labels| / |labels|.
// Throws std::invalid_argument on length mismatch.
PrecisionRecall ComputePrecisionRecall(const std::vector<bool>& mask,
                                       const std::vector<bool>& labels);

// RANSAC inliers over filter survivors; 1.0 when nothing survived.
double SurvivalPrecision(std::size_t ransac_inliers,
                         std::size_t filter_survivors);

}  // namespace uavmatch
