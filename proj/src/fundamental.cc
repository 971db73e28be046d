#include "uavmatch/fundamental.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace uavmatch {
namespace {

// Relative size of the seventh singular value below which the design
// matrix counts as rank deficient.
constexpr double kRankTolerance = 1e-10;

Mat3 Calibration(const CameraIntrinsics& in) {
  Mat3 k;
  k << in.focal_length, 0, in.principal_point.x(), 0, in.focal_length,
      in.principal_point.y(), 0, 0, 1;
  return k;
}

Mat3 Skew(const Vec3& v) {
  Mat3 s;
  s << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return s;
}

double EvalCubic(double a, double b, double c, double d, double x) {
  return ((a * x + b) * x + c) * x + d;
}

std::vector<double> RealQuadraticRoots(double a, double b, double c) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0.0) return {};
  if (std::abs(a) <= 1e-14 * scale) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> roots;
  if (q != 0.0) {
    roots = {q / a, c / q};
  } else {
    roots = {0.0, 0.0};
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

Mat3 CanonicalScale(const Mat3& m) {
  Mat3 out = m / m.norm();
  double best = 0.0;
  double sign = 1.0;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (std::abs(out(r, c)) > best) {
        best = std::abs(out(r, c));
        sign = out(r, c) < 0.0 ? -1.0 : 1.0;
      }
    }
  }
  return out * sign;
}

FundamentalMatrix::FundamentalMatrix(const Mat3& m) : m_(CanonicalScale(m)) {}

bool IsotropicNormalization(std::span<const Vec2> points, Mat3* transform) {
  if (points.empty()) return false;
  Vec2 centroid = Vec2::Zero();
  for (const Vec2& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  double mean_dist = 0.0;
  for (const Vec2& p : points) mean_dist += (p - centroid).norm();
  mean_dist /= static_cast<double>(points.size());
  if (!(mean_dist > 1e-12 * (1.0 + centroid.norm()))) return false;
  const double s = std::sqrt(2.0) / mean_dist;
  *transform << s, 0, -s * centroid.x(), 0, s, -s * centroid.y(), 0, 0, 1;
  return true;
}

std::vector<double> RealCubicRoots(double a, double b, double c, double d) {
  const double scale =
      std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (scale == 0.0) return {};
  if (std::abs(a) <= 1e-12 * scale) return RealQuadraticRoots(b, c, d);

  Mat3 companion = Mat3::Zero();
  companion(0, 0) = -b / a;
  companion(0, 1) = -c / a;
  companion(0, 2) = -d / a;
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  const Eigen::EigenSolver<Mat3> solver(companion, false);
  std::vector<double> roots;
  for (int i = 0; i < 3; ++i) {
    const auto z = solver.eigenvalues()(i);
    if (std::abs(z.imag()) > 1e-8 * std::max(1.0, std::abs(z))) continue;
    double x = z.real();
    // Newton polish against the original coefficients.
    for (int it = 0; it < 4; ++it) {
      const double fx = EvalCubic(a, b, c, d, x);
      const double dfx = (3.0 * a * x + 2.0 * b) * x + c;
      if (dfx == 0.0) break;
      const double step = fx / dfx;
      x -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<FundamentalMatrix> SevenPoint(
    std::span<const Correspondence> sample) {
  if (sample.size() != 7) {
    throw std::invalid_argument("SevenPoint needs exactly 7 correspondences");
  }
  std::array<Vec2, 7> pts1;
  std::array<Vec2, 7> pts2;
  for (std::size_t i = 0; i < 7; ++i) {
    pts1[i] = sample[i].p1;
    pts2[i] = sample[i].p2;
  }
  Mat3 t1, t2;
  if (!IsotropicNormalization(pts1, &t1) || !IsotropicNormalization(pts2, &t2)) {
    return {};
  }

  // Zero-padded to square so the null space comes out of a full V.
  Eigen::Matrix<double, 9, 9> design = Eigen::Matrix<double, 9, 9>::Zero();
  for (int i = 0; i < 7; ++i) {
    const Vec3 x1 = t1 * pts1[i].homogeneous();
    const Vec3 x2 = t2 * pts2[i].homogeneous();
    design.row(i) << x2.x() * x1.x(), x2.x() * x1.y(), x2.x(),
        x2.y() * x1.x(), x2.y() * x1.y(), x2.y(), x1.x(), x1.y(), 1.0;
  }
  const Eigen::JacobiSVD<Eigen::Matrix<double, 9, 9>> svd(design,
                                                          Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(6) > kRankTolerance * sv(0))) return {};

  const Eigen::Matrix<double, 9, 1> v1 = svd.matrixV().col(7);
  const Eigen::Matrix<double, 9, 1> v2 = svd.matrixV().col(8);
  const Mat3 f1 = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(v1.data());
  const Mat3 f2 = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(v2.data());

  // p(a) = det(a F1 + (1 - a) F2) = det(F2 + a G), sampled at a = 0, 1, -1, 2.
  const Mat3 g = f1 - f2;
  const double p0 = f2.determinant();
  const double p1 = f1.determinant();
  const double pm1 = (f2 - g).determinant();
  const double p2 = (f2 + 2.0 * g).determinant();
  const double cd = p0;
  const double cb = 0.5 * (p1 + pm1) - p0;
  const double a_plus_c = 0.5 * (p1 - pm1);
  // p(2) = 8a + 4b + 2c + d
  const double ca = (p2 - 4.0 * cb - cd - 2.0 * a_plus_c) / 6.0;
  const double cc = a_plus_c - ca;

  std::vector<FundamentalMatrix> candidates;
  for (double alpha : RealCubicRoots(ca, cb, cc, cd)) {
    const Mat3 f_norm = alpha * f1 + (1.0 - alpha) * f2;
    const Mat3 f = t2.transpose() * f_norm * t1;
    if (!f.allFinite() || f.norm() == 0.0) continue;
    candidates.emplace_back(f);
  }
  return candidates;
}

double SampsonDistance(const Vec2& p1, const Vec2& p2, const Mat3& f) {
  const Vec3 x1 = p1.homogeneous();
  const Vec3 x2 = p2.homogeneous();
  const Vec3 l2 = f * x1;
  const Vec3 l1 = f.transpose() * x2;
  const double r = x2.dot(l2);
  const double denom = l2.x() * l2.x() + l2.y() * l2.y() + l1.x() * l1.x() +
                       l1.y() * l1.y();
  if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
  return std::abs(r) / std::sqrt(denom);
}

double EpipolarResidual(const Correspondence& c, const FundamentalMatrix& f) {
  return SampsonDistance(c.p1, c.p2, f.matrix());
}

FundamentalMatrix FundamentalFromPoses(const CameraIntrinsics& intrinsics1,
                                       const CameraPose& pose1,
                                       const CameraIntrinsics& intrinsics2,
                                       const CameraPose& pose2) {
  const Mat3& r1 = pose1.rotation_world_to_camera;
  const Mat3& r2 = pose2.rotation_world_to_camera;
  const Mat3 r = r2 * r1.transpose();
  const Vec3 t = r2 * (pose1.center_world - pose2.center_world);
  const Mat3 e = Skew(t) * r;
  return FundamentalMatrix(Calibration(intrinsics2).inverse().transpose() * e *
                           Calibration(intrinsics1).inverse());
}

}  // namespace uavmatch
