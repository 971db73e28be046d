#include "uavmatch/geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace uavmatch {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kPoseTolerance = 1e-6;
constexpr int kMaxUndistortIterations = 20;
constexpr double kUndistortStepPx = 1e-8;
constexpr double kParallelRay = 1e-12;

// Normalized-coordinate distortion: returns the distorted normalized point.
Vec2 DistortNormalized(const Vec2& n, const CameraIntrinsics& in) {
  const double x = n.x();
  const double y = n.y();
  const double r2 = x * x + y * y;
  const auto& k = in.radial;
  const auto& p = in.tangential;
  const double radial = 1.0 + r2 * (k[0] + r2 * (k[1] + r2 * k[2]));
  return {x * radial + 2.0 * p[0] * x * y + p[1] * (r2 + 2.0 * x * x),
          y * radial + p[0] * (r2 + 2.0 * y * y) + 2.0 * p[1] * x * y};
}

}  // namespace

void CameraIntrinsics::Validate() const {
  if (!(focal_length > 0.0) || !std::isfinite(focal_length)) {
    throw InvalidIntrinsics("focal length must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw InvalidIntrinsics("image size must be positive");
  }
  if (!principal_point.allFinite()) {
    throw InvalidIntrinsics("principal point must be finite");
  }
}

bool CameraIntrinsics::Contains(const Vec2& pixel) const {
  return pixel.x() >= 0.0 && pixel.y() >= 0.0 && pixel.x() <= width &&
         pixel.y() <= height;
}

bool CameraIntrinsics::HasDistortion() const {
  return radial[0] != 0.0 || radial[1] != 0.0 || radial[2] != 0.0 ||
         tangential[0] != 0.0 || tangential[1] != 0.0;
}

bool IsRotation(const Mat3& m, double tolerance) {
  if (!m.allFinite()) return false;
  const double orth =
      (m * m.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
  return orth < tolerance && std::abs(m.determinant() - 1.0) < tolerance;
}

Mat3 RotX(double degrees) {
  const double c = std::cos(degrees * kDegToRad);
  const double s = std::sin(degrees * kDegToRad);
  Mat3 r;
  r << 1, 0, 0, 0, c, -s, 0, s, c;
  return r;
}

Mat3 RotY(double degrees) {
  const double c = std::cos(degrees * kDegToRad);
  const double s = std::sin(degrees * kDegToRad);
  Mat3 r;
  r << c, 0, s, 0, 1, 0, -s, 0, c;
  return r;
}

Mat3 RotZ(double degrees) {
  const double c = std::cos(degrees * kDegToRad);
  const double s = std::sin(degrees * kDegToRad);
  Mat3 r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

Mat3 RotationFromOmegaPhiKappa(double omega, double phi, double kappa) {
  // Classic photogrammetric matrix (z-up camera) flipped to a camera that
  // looks along +Z with image rows along +Y.
  const Mat3 flip = Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
  return flip * (RotX(omega) * RotY(phi) * RotZ(kappa)).transpose();
}

std::array<double, 3> OmegaPhiKappaFromRotation(const Mat3& rotation) {
  const Mat3 flip = Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
  const Mat3 a = (flip * rotation).transpose();
  const double phi = std::asin(std::clamp(a(0, 2), -1.0, 1.0));
  const double omega = std::atan2(-a(1, 2), a(2, 2));
  const double kappa = std::atan2(-a(0, 1), a(0, 0));
  return {omega * kRadToDeg, phi * kRadToDeg, kappa * kRadToDeg};
}

Mat3 MountRotation(double pitch, double roll, double yaw) {
  return RotX(pitch) * RotY(roll) * RotZ(yaw);
}

PlatformPose NavigationRecord::ToPlatformPose() const {
  return {RotationFromOmegaPhiKappa(omega, phi, kappa), position};
}

MountCalibration MountAngles::ToCalibration() const {
  return {MountRotation(pitch, roll, yaw), lever_arm};
}

CameraPose ComposeCameraPose(const PlatformPose& platform,
                             const MountCalibration& mount) {
  const Mat3& big_r = platform.rotation_world_to_platform;
  const Mat3& small_r = mount.rotation_platform_to_camera;
  if (!IsRotation(big_r, kPoseTolerance)) {
    throw InvalidPose("platform rotation is not orthonormal");
  }
  if (!IsRotation(small_r, kPoseTolerance)) {
    throw InvalidPose("mount rotation is not orthonormal");
  }
  if (!platform.position_world.allFinite() || !mount.translation.allFinite()) {
    throw InvalidPose("non-finite translation");
  }
  CameraPose pose;
  pose.rotation_world_to_camera = small_r * big_r;
  pose.center_world = big_r.transpose() * mount.translation +
                      platform.position_world;
  return pose;
}

Vec2 DistortPoint(const Vec2& ideal, const CameraIntrinsics& intrinsics) {
  const double f = intrinsics.focal_length;
  const Vec2 n = (ideal - intrinsics.principal_point) / f;
  return DistortNormalized(n, intrinsics) * f + intrinsics.principal_point;
}

UndistortResult UndistortPoint(const Vec2& distorted,
                               const CameraIntrinsics& intrinsics) {
  UndistortResult result{distorted, 0, true};
  if (!intrinsics.HasDistortion()) return result;

  const double f = intrinsics.focal_length;
  const Vec2 target = (distorted - intrinsics.principal_point) / f;
  Vec2 n = target;
  result.converged = false;
  for (int it = 1; it <= kMaxUndistortIterations; ++it) {
    // x <- (x_d - tangential(x)) / radial(x)
    const double r2 = n.squaredNorm();
    const auto& k = intrinsics.radial;
    const double radial = 1.0 + r2 * (k[0] + r2 * (k[1] + r2 * k[2]));
    const Vec2 tangential = DistortNormalized(n, intrinsics) - n * radial;
    const Vec2 next = (target - tangential) / radial;
    const double step_px = (next - n).norm() * f;
    n = next;
    result.iterations = it;
    if (step_px < kUndistortStepPx) {
      result.converged = true;
      break;
    }
  }
  result.point = n * f + intrinsics.principal_point;
  return result;
}

Vec3 PixelRay(const Vec2& pixel, const CameraIntrinsics& intrinsics,
              const CameraPose& pose) {
  const double f = intrinsics.focal_length;
  const Vec3 camera_dir((pixel.x() - intrinsics.principal_point.x()) / f,
                        (pixel.y() - intrinsics.principal_point.y()) / f, 1.0);
  return pose.rotation_world_to_camera.transpose() * camera_dir;
}

std::optional<Vec2> ProjectToPlane(const Vec2& pixel,
                                   const CameraIntrinsics& intrinsics,
                                   const CameraPose& pose,
                                   const ProjectionPlane& plane) {
  const Vec3 d = PixelRay(pixel, intrinsics, pose);
  if (std::abs(d.z()) < kParallelRay) return std::nullopt;
  const double lambda = (plane.elevation - pose.center_world.z()) / d.z();
  if (!(lambda > 0.0)) return std::nullopt;
  return Vec2(pose.center_world.x() + lambda * d.x(),
              pose.center_world.y() + lambda * d.y());
}

std::optional<Vec2> ProjectToImage(const Vec3& world,
                                   const CameraIntrinsics& intrinsics,
                                   const CameraPose& pose) {
  const Vec3 xc = pose.rotation_world_to_camera * (world - pose.center_world);
  if (!(xc.z() > 0.0)) return std::nullopt;
  const double f = intrinsics.focal_length;
  return Vec2(f * xc.x() / xc.z() + intrinsics.principal_point.x(),
              f * xc.y() / xc.z() + intrinsics.principal_point.y());
}

}  // namespace uavmatch
