#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/LU>

namespace uavmatch {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

class InvalidPose : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidIntrinsics : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Pinhole camera with Brown radial-tangential distortion (eight parameters
// plus the image size).
struct CameraIntrinsics {
  double focal_length = 1.0;
  Vec2 principal_point = Vec2::Zero();
  std::array<double, 3> radial{0.0, 0.0, 0.0};      // k1 k2 k3
  std::array<double, 2> tangential{0.0, 0.0};       // p1 p2
  int width = 1;
  int height = 1;

  // Throws InvalidIntrinsics when focal length or image size is not positive.
  void Validate() const;
  bool Contains(const Vec2& pixel) const;
  bool HasDistortion() const;
};

// R maps world-frame vectors into the platform frame; T is the platform
// position in world coordinates.
struct PlatformPose {
  Mat3 rotation_world_to_platform = Mat3::Identity();
  Vec3 position_world = Vec3::Zero();
};

// Camera mount relative to the platform: r maps platform-frame vectors into
// the camera frame, t is the lever arm expressed in the platform frame.
struct MountCalibration {
  Mat3 rotation_platform_to_camera = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static MountCalibration Nadir() { return {}; }
};

// Navigation record: platform position (m) and omega-phi-kappa (degrees).
struct NavigationRecord {
  Vec3 position = Vec3::Zero();
  double omega = 0.0;
  double phi = 0.0;
  double kappa = 0.0;

  PlatformPose ToPlatformPose() const;
};

// Camera installation angles (degrees) and lever arm (m).
struct MountAngles {
  double pitch = 0.0;
  double roll = 0.0;
  double yaw = 0.0;
  Vec3 lever_arm = Vec3::Zero();

  MountCalibration ToCalibration() const;
};

// Camera looks along its +Z axis; +X follows image columns, +Y image rows.
struct CameraPose {
  Mat3 rotation_world_to_camera = Mat3::Identity();
  Vec3 center_world = Vec3::Zero();
};

struct ProjectionPlane {
  double elevation = 0.0;
};

struct UndistortResult {
  Vec2 point;
  int iterations = 0;
  bool converged = true;
};

bool IsRotation(const Mat3& m, double tolerance);

// Active rotations about the coordinate axes, angles in degrees.
Mat3 RotX(double degrees);
Mat3 RotY(double degrees);
Mat3 RotZ(double degrees);

// Photogrammetric omega-phi-kappa angles (degrees) to a world-to-platform
// rotation. All-zero angles give a level platform looking straight down:
// diag(1, -1, -1).
Mat3 RotationFromOmegaPhiKappa(double omega, double phi, double kappa);
// Inverse of RotationFromOmegaPhiKappa; phi is returned in [-90, 90].
std::array<double, 3> OmegaPhiKappaFromRotation(const Mat3& rotation);

// Mount rotation from installation angles (degrees): r = Rx(pitch) Ry(roll) Rz(yaw).
Mat3 MountRotation(double pitch, double roll, double yaw);

// R_c = r R, T_c = R^T t + T. Throws InvalidPose if either rotation is not
// orthonormal within 1e-6.
CameraPose ComposeCameraPose(const PlatformPose& platform,
                             const MountCalibration& mount);

Vec2 DistortPoint(const Vec2& ideal, const CameraIntrinsics& intrinsics);

// Fixed-point inversion of DistortPoint. Stops when successive iterates
// differ by less than 1e-8 px, or after 20 iterations with converged=false.
UndistortResult UndistortPoint(const Vec2& distorted,
                               const CameraIntrinsics& intrinsics);

// Viewing ray of an undistorted pixel in world coordinates (not normalized).
Vec3 PixelRay(const Vec2& pixel, const CameraIntrinsics& intrinsics,
              const CameraPose& pose);

// Intersection of the pixel's viewing ray with Z = elevation. Returns
// nullopt when the ray is parallel to the plane or the intersection lies
// behind (or at) the camera center.
std::optional<Vec2> ProjectToPlane(const Vec2& pixel,
                                   const CameraIntrinsics& intrinsics,
                                   const CameraPose& pose,
                                   const ProjectionPlane& plane);

// World point to undistorted pixel. Returns nullopt for points at or behind
// the camera.
std::optional<Vec2> ProjectToImage(const Vec3& world,
                                   const CameraIntrinsics& intrinsics,
                                   const CameraPose& pose);

}  // namespace uavmatch
