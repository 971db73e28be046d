#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "uavmatch/geometry.h"

namespace uavmatch {

// A candidate match: p1 in image 1, p2 in image 2, id = position in the
// input set.
struct Correspondence {
  Vec2 p1 = Vec2::Zero();
  Vec2 p2 = Vec2::Zero();
  std::size_t id = 0;
};

// Motions shorter than this carry no direction.
inline constexpr double kDegenerateMotionLength = 1e-9;

// Directed object-space vector from the plane projection of p1 (start) to
// the plane projection of p2 (end).
struct Motion {
  Vec2 start = Vec2::Zero();
  Vec2 end = Vec2::Zero();
  double direction = 0.0;  // degrees in [0, 360); 0 when degenerate
  double length = 0.0;     // meters
  std::size_t source_id = 0;
  bool degenerate = false;
};

// Counter-clockwise angle of end - start from +X, in [0, 360). nullopt for
// a degenerate (length < 1e-9) motion.
std::optional<double> MotionDirection(const Vec2& start, const Vec2& end);
double MotionLength(const Vec2& start, const Vec2& end);

Motion MakeMotion(const Vec2& start, const Vec2& end, std::size_t source_id);

// Maps any finite angle in degrees into [0, 360).
double WrapDegrees(double degrees);

struct MotionSet {
  std::vector<Motion> motions;
  // Correspondences whose ray missed the plane in either image.
  std::vector<std::size_t> dropped;
  // Correspondences with a point outside its image frame (kept).
  std::vector<std::size_t> out_of_frame;
};

struct StereoGeometry {
  CameraIntrinsics intrinsics1;
  CameraIntrinsics intrinsics2;
  CameraPose pose1;
  CameraPose pose2;
  ProjectionPlane plane;
};

// Undistorts both points of every correspondence and projects them onto the
// plane. Output order follows input order.
MotionSet GenerateMotions(std::span<const Correspondence> matches,
                          const StereoGeometry& geometry);

}  // namespace uavmatch
