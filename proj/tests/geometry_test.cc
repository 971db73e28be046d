#include <doctest.h>

#include <cmath>

#include "support/generators.h"
#include "uavmatch/geometry.h"

using namespace uavmatch;

namespace {

CameraIntrinsics TestCamera() {
  CameraIntrinsics k;
  k.focal_length = 1000.0;
  k.principal_point = Vec2(640.0, 480.0);
  k.width = 1280;
  k.height = 960;
  return k;
}

CameraPose NadirAt(const Vec3& center) {
  CameraPose pose;
  pose.rotation_world_to_camera = Vec3(1.0, -1.0, -1.0).asDiagonal();
  pose.center_world = center;
  return pose;
}

double MaxAbs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("intrinsics validation") {
  CameraIntrinsics k = TestCamera();
  CHECK_NOTHROW(k.Validate());
  k.focal_length = 0.0;
  CHECK_THROWS_AS(k.Validate(), InvalidIntrinsics);
  k = TestCamera();
  k.height = 0;
  CHECK_THROWS_AS(k.Validate(), InvalidIntrinsics);
}

TEST_CASE("level navigation record looks straight down") {
  const Mat3 r = RotationFromOmegaPhiKappa(0.0, 0.0, 0.0);
  CHECK(MaxAbs(r - Mat3(Vec3(1.0, -1.0, -1.0).asDiagonal())) < 1e-15);
}

TEST_CASE("omega-phi-kappa round trip") {
  gen::Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const double omega = gen::Uniform(rng, -179.0, 179.0);
    const double phi = gen::Uniform(rng, -89.0, 89.0);
    const double kappa = gen::Uniform(rng, -179.0, 179.0);
    const Mat3 r = RotationFromOmegaPhiKappa(omega, phi, kappa);
    REQUIRE(IsRotation(r, 1e-9));
    const auto back = OmegaPhiKappaFromRotation(r);
    CHECK(back[0] == doctest::Approx(omega).epsilon(1e-9));
    CHECK(back[1] == doctest::Approx(phi).epsilon(1e-9));
    CHECK(back[2] == doctest::Approx(kappa).epsilon(1e-9));
  }
}

TEST_CASE("rotation matrices are orthonormal") {
  gen::Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Mat3 m = MountRotation(gen::Uniform(rng, -90, 90),
                                 gen::Uniform(rng, -90, 90),
                                 gen::Uniform(rng, -180, 180));
    CHECK(MaxAbs(m * m.transpose() - Mat3::Identity()) < 1e-9);
    CHECK(std::abs(m.determinant() - 1.0) < 1e-9);
  }
}

TEST_CASE("zero mount angles are the identity") {
  const MountCalibration m = MountAngles{}.ToCalibration();
  CHECK(MaxAbs(m.rotation_platform_to_camera - Mat3::Identity()) == 0.0);
  CHECK(m.translation.norm() == 0.0);
}

TEST_CASE("compose camera pose") {
  SUBCASE("nadir mount passes the platform pose through") {
    PlatformPose p;
    p.rotation_world_to_platform = RotationFromOmegaPhiKappa(3.0, -2.0, 40.0);
    p.position_world = Vec3(10.0, -4.0, 300.0);
    const CameraPose c = ComposeCameraPose(p, MountCalibration::Nadir());
    CHECK(MaxAbs(c.rotation_world_to_camera - p.rotation_world_to_platform) == 0.0);
    CHECK((c.center_world - p.position_world).norm() == 0.0);
  }
  SUBCASE("rotation-only mount") {
    PlatformPose p;
    p.position_world = Vec3(1.0, 2.0, 3.0);
    MountCalibration m;
    m.rotation_platform_to_camera = RotZ(90.0);
    const CameraPose c = ComposeCameraPose(p, m);
    CHECK(MaxAbs(c.rotation_world_to_camera - RotZ(90.0)) < 1e-15);
    CHECK((c.center_world - Vec3(1.0, 2.0, 3.0)).norm() == 0.0);
  }
  SUBCASE("lever arm is rotated into the world frame") {
    PlatformPose p;
    p.rotation_world_to_platform = RotZ(180.0);
    p.position_world = Vec3(0.0, 0.0, 100.0);
    MountCalibration m;
    m.translation = Vec3(0.0, 0.0, 0.5);
    const CameraPose c = ComposeCameraPose(p, m);
    CHECK(MaxAbs(c.rotation_world_to_camera - RotZ(180.0)) < 1e-15);
    CHECK((c.center_world - Vec3(0.0, 0.0, 100.5)).norm() < 1e-12);
  }
  SUBCASE("non-orthonormal input is rejected") {
    PlatformPose p;
    p.rotation_world_to_platform(0, 0) = 1.1;
    CHECK_THROWS_AS(ComposeCameraPose(p, MountCalibration::Nadir()), InvalidPose);
  }
  SUBCASE("output stays orthonormal") {
    gen::Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
      PlatformPose p;
      p.rotation_world_to_platform = gen::RandomRotation(rng);
      MountCalibration m;
      m.rotation_platform_to_camera = gen::RandomRotation(rng);
      const Mat3 r = ComposeCameraPose(p, m).rotation_world_to_camera;
      CHECK(MaxAbs(r * r.transpose() - Mat3::Identity()) < 1e-9);
    }
  }
}

TEST_CASE("undistort") {
  CameraIntrinsics k = TestCamera();
  SUBCASE("no distortion is the identity") {
    const UndistortResult r = UndistortPoint(Vec2(100.0, 200.0), k);
    CHECK(r.point == Vec2(100.0, 200.0));
    CHECK(r.converged);
  }
  SUBCASE("principal point is fixed") {
    k.radial = {0.3, -0.1, 0.02};
    k.tangential = {0.001, -0.002};
    const UndistortResult r = UndistortPoint(k.principal_point, k);
    CHECK((r.point - k.principal_point).norm() < 1e-12);
  }
  SUBCASE("small radial term round-trips") {
    k.radial = {1e-8, 0.0, 0.0};
    const Vec2 p = k.principal_point + Vec2(500.0, 0.0);
    const UndistortResult r = UndistortPoint(p, k);
    CHECK((DistortPoint(r.point, k) - p).norm() < 1e-6);
  }
  SUBCASE("undistort inverts distort across the frame") {
    k.radial = {-0.05, 0.01, 0.0};
    k.tangential = {1e-4, -5e-5};
    gen::Rng rng(14);
    for (int trial = 0; trial < 500; ++trial) {
      const Vec2 ideal(gen::Uniform(rng, 0.0, k.width),
                       gen::Uniform(rng, 0.0, k.height));
      const Vec2 distorted = DistortPoint(ideal, k);
      if (!k.Contains(distorted)) continue;
      const UndistortResult r = UndistortPoint(distorted, k);
      CHECK((r.point - ideal).norm() < 1e-6);
    }
  }
}

TEST_CASE("projection onto a horizontal plane") {
  const CameraIntrinsics k = TestCamera();
  SUBCASE("principal ray hits below the camera") {
    const auto p = ProjectToPlane(k.principal_point, k, NadirAt({0, 0, 300}),
                                  ProjectionPlane{0.0});
    REQUIRE(p);
    CHECK(p->norm() < 1e-12);
  }
  SUBCASE("one focal length off-axis is 45 degrees") {
    const Vec2 pixel = k.principal_point + Vec2(k.focal_length, 0.0);
    const auto p = ProjectToPlane(pixel, k, NadirAt({0, 0, 300}),
                                  ProjectionPlane{0.0});
    REQUIRE(p);
    CHECK((*p - Vec2(300.0, 0.0)).norm() < 1e-9);
  }
  SUBCASE("plane through the camera center") {
    CHECK_FALSE(ProjectToPlane(k.principal_point, k, NadirAt({0, 0, 100}),
                               ProjectionPlane{100.0}));
  }
  SUBCASE("plane above a downward camera") {
    CHECK_FALSE(ProjectToPlane(k.principal_point, k, NadirAt({0, 0, 100}),
                               ProjectionPlane{150.0}));
  }
  SUBCASE("horizontal ray") {
    CameraPose pose;
    pose.rotation_world_to_camera = RotX(-90.0);  // looks along the horizon
    pose.center_world = Vec3(0, 0, 10);
    CHECK_FALSE(ProjectToPlane(k.principal_point, k, pose, ProjectionPlane{0.0}));
  }
}

TEST_CASE("plane projection and reprojection agree") {
  gen::Rng rng(15);
  CameraIntrinsics k = TestCamera();
  k.radial = {-0.02, 0.003, 0.0};
  for (int trial = 0; trial < 300; ++trial) {
    PlatformPose platform;
    platform.rotation_world_to_platform = RotationFromOmegaPhiKappa(
        gen::Uniform(rng, -5, 5), gen::Uniform(rng, -5, 5),
        gen::Uniform(rng, -180, 180));
    platform.position_world = Vec3(gen::Uniform(rng, -50, 50),
                                   gen::Uniform(rng, -50, 50),
                                   gen::Uniform(rng, 100, 400));
    const CameraPose pose = ComposeCameraPose(
        platform, MountAngles{gen::Uniform(rng, 0, 45), 0.0, 0.0}.ToCalibration());
    const Vec2 pixel(gen::Uniform(rng, 0, k.width), gen::Uniform(rng, 0, k.height));
    const double z0 = gen::Uniform(rng, -100.0, 20.0);
    const Vec2 ideal = UndistortPoint(pixel, k).point;
    const auto ground = ProjectToPlane(ideal, k, pose, ProjectionPlane{z0});
    if (!ground) continue;
    const auto back = ProjectToImage(Vec3(ground->x(), ground->y(), z0), k, pose);
    REQUIRE(back);
    CHECK((*back - ideal).norm() < 1e-6);
  }
}

TEST_CASE("moving the plane slides the point along the ray") {
  gen::Rng rng(16);
  const CameraIntrinsics k = TestCamera();
  for (int trial = 0; trial < 200; ++trial) {
    CameraPose pose = NadirAt({gen::Uniform(rng, -10, 10), 0.0, 300.0});
    pose.rotation_world_to_camera =
        MountRotation(gen::Uniform(rng, 0, 40), 0, 0) * pose.rotation_world_to_camera;
    const Vec2 pixel(gen::Uniform(rng, 0, k.width), gen::Uniform(rng, 0, k.height));
    const double dz = gen::Uniform(rng, -50, 50);
    const auto a = ProjectToPlane(pixel, k, pose, ProjectionPlane{0.0});
    const auto b = ProjectToPlane(pixel, k, pose, ProjectionPlane{dz});
    if (!a || !b) continue;
    const Vec3 d = PixelRay(pixel, k, pose);
    const Vec2 expected = *a + dz * Vec2(d.x() / d.z(), d.y() / d.z());
    CHECK((*b - expected).norm() < 1e-9);
  }
}
