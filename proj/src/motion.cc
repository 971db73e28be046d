#include "uavmatch/motion.h"

#include <cmath>
#include <numbers>

namespace uavmatch {

double WrapDegrees(double degrees) {
  double wrapped = std::fmod(degrees, 360.0);
  if (wrapped < 0.0) wrapped += 360.0;
  // fmod of a tiny negative value can round back up to exactly 360.
  if (wrapped >= 360.0) wrapped = 0.0;
  return wrapped;
}

std::optional<double> MotionDirection(const Vec2& start, const Vec2& end) {
  const Vec2 d = end - start;
  if (d.norm() < kDegenerateMotionLength) return std::nullopt;
  return WrapDegrees(std::atan2(d.y(), d.x()) * 180.0 / std::numbers::pi);
}

double MotionLength(const Vec2& start, const Vec2& end) {
  return (end - start).norm();
}

Motion MakeMotion(const Vec2& start, const Vec2& end, std::size_t source_id) {
  Motion m;
  m.start = start;
  m.end = end;
  m.length = MotionLength(start, end);
  m.source_id = source_id;
  if (const auto dir = MotionDirection(start, end)) {
    m.direction = *dir;
  } else {
    m.degenerate = true;
  }
  return m;
}

MotionSet GenerateMotions(std::span<const Correspondence> matches,
                          const StereoGeometry& geometry) {
  MotionSet out;
  out.motions.reserve(matches.size());
  for (const Correspondence& c : matches) {
    if (!geometry.intrinsics1.Contains(c.p1) ||
        !geometry.intrinsics2.Contains(c.p2)) {
      out.out_of_frame.push_back(c.id);
    }
    const Vec2 u1 = UndistortPoint(c.p1, geometry.intrinsics1).point;
    const Vec2 u2 = UndistortPoint(c.p2, geometry.intrinsics2).point;
    const auto s = ProjectToPlane(u1, geometry.intrinsics1, geometry.pose1,
                                  geometry.plane);
    const auto t = ProjectToPlane(u2, geometry.intrinsics2, geometry.pose2,
                                  geometry.plane);
    if (!s || !t) {
      out.dropped.push_back(c.id);
      continue;
    }
    out.motions.push_back(MakeMotion(*s, *t, c.id));
  }
  return out;
}

}  // namespace uavmatch
