#pragma once

#include <span>
#include <vector>

#include "uavmatch/geometry.h"
#include "uavmatch/motion.h"

namespace uavmatch {

// Rank-2 epipolar matrix with x2^T F x1 = 0, stored with unit Frobenius norm
// and its largest-magnitude entry positive.
class FundamentalMatrix {
 public:
  FundamentalMatrix() = default;
  // Rescales `m` into the canonical form. `m` must be non-zero.
  explicit FundamentalMatrix(const Mat3& m);

  const Mat3& matrix() const { return m_; }
  FundamentalMatrix Transposed() const { return FundamentalMatrix(m_.transpose()); }

 private:
  Mat3 m_ = Mat3::Zero();
};

// Canonical scaling of a 3x3 matrix: unit Frobenius norm, largest-magnitude
// entry (first in row-major order on ties) positive.
Mat3 CanonicalScale(const Mat3& m);

// Similarity moving the centroid to the origin with mean distance sqrt(2).
// Returns false when the points are coincident.
bool IsotropicNormalization(std::span<const Vec2> points, Mat3* transform);

// Seven-point solver. Returns one candidate per real root of
// det(a F1 + (1 - a) F2) = 0 over the two-dimensional null space of the
// normalized design matrix. An empty result means a degenerate sample
// (design matrix rank below 7, or coincident points).
// Throws std::invalid_argument unless exactly seven correspondences are given.
std::vector<FundamentalMatrix> SevenPoint(std::span<const Correspondence> sample);

// Real roots of a x^3 + b x^2 + c x + d, ascending. Falls back to lower
// degree when the leading coefficients vanish.
std::vector<double> RealCubicRoots(double a, double b, double c, double d);

// Sampson distance of (p1, p2) under F, in pixels. +inf when both epipolar
// line gradients vanish.
double SampsonDistance(const Vec2& p1, const Vec2& p2, const Mat3& f);
double EpipolarResidual(const Correspondence& c, const FundamentalMatrix& f);

// F of two calibrated views: F = K2^-T [t]x R K1^-1 with R = R2 R1^T,
// t = R2 (C1 - C2).
FundamentalMatrix FundamentalFromPoses(const CameraIntrinsics& intrinsics1,
                                       const CameraPose& pose1,
                                       const CameraIntrinsics& intrinsics2,
                                       const CameraPose& pose2);

}  // namespace uavmatch
