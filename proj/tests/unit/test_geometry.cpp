#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "clothgrasp/errors.hpp"
#include "clothgrasp/geometry.hpp"

namespace clothgrasp {
namespace {

constexpr double kPi = std::numbers::pi;

CameraModel Intrinsics(double f, double cx, double cy) {
  CameraModel cam;
  cam.fx = cam.fy = f;
  cam.cx = cx;
  cam.cy = cy;
  return cam;
}

Eigen::Matrix3d RandomRotation(std::mt19937& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(gen), n(gen), n(gen), n(gen));
  return q.normalized().toRotationMatrix();
}

// Independent pinhole forward model.
Eigen::Vector2d ForwardPinhole(const Eigen::Vector3d& w, const CameraModel& cam) {
  const Eigen::Vector3d c = cam.rotation.inverse() * (w - cam.translation);
  return {cam.fx * (c.x() / c.z()) + cam.cx, cam.fy * (c.y() / c.z()) + cam.cy};
}

TEST(CameraTest, Validation) {
  CameraModel cam;
  EXPECT_NO_THROW(cam.Validate());
  cam.fx = 0.0;
  EXPECT_THROW(cam.Validate(), Error);
  cam = CameraModel();
  cam.rotation(0, 0) = -1.0;  // reflection
  EXPECT_THROW(cam.Validate(), Error);
  EXPECT_TRUE(IsRotation(CameraModel::Nadir(0.3, 0.3, 0.7).rotation));
}

TEST(DeprojectTest, Examples) {
  const CameraModel a = Intrinsics(504.0, 320.0, 288.0);
  const Eigen::Vector3d p = Deproject(Eigen::Vector2d(320.0, 288.0), 1.0, a);
  EXPECT_NEAR((p - Eigen::Vector3d(0, 0, 1)).norm(), 0.0, 1e-15);
  const CameraModel b = Intrinsics(600.0, 320.0, 240.0);
  const Eigen::Vector3d q = Deproject(Eigen::Vector2d(620.0, 240.0), 1.2, b);
  EXPECT_NEAR((q - Eigen::Vector3d(0.6, 0.0, 1.2)).norm(), 0.0, 1e-12);
}

TEST(DeprojectTest, InvalidDepthAndFallback) {
  DepthImage d(3, 3, 0.0);
  const CameraModel cam = Intrinsics(500.0, 1.0, 1.0);
  try {
    Deproject(Pixel{1, 1}, d, cam);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidDepth);
  }
  d.set(0, 0, 0.5);
  d.set(2, 2, 0.7);
  d.set(2, 0, 0.9);
  const Eigen::Vector3d p = Deproject(Pixel{1, 1}, d, cam, {.median_fallback = true});
  EXPECT_DOUBLE_EQ(p.z(), 0.7);
}

TEST(DeprojectTest, ProjectRoundTrip) {
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(0.0, 640.0), v(0.0, 576.0), d(0.2, 3.0);
  CameraModel cam = CameraModel::Nadir(0.3, 0.3, 0.7);
  cam.rotation = RandomRotation(gen);
  for (int i = 0; i < 2000; ++i) {
    const Eigen::Vector2d px(u(gen), v(gen));
    const Eigen::Vector3d w = Deproject(px, d(gen), cam);
    EXPECT_LT((Project(w, cam) - px).norm(), 1e-6);
    EXPECT_LT((ForwardPinhole(w, cam) - px).norm(), 1e-6);
  }
}

TEST(DeprojectTest, EquivariantUnderExtrinsicChange) {
  std::mt19937 gen(8);
  CameraModel cam = Intrinsics(550.0, 300.0, 200.0);
  cam.rotation = RandomRotation(gen);
  cam.translation = Eigen::Vector3d(0.1, -0.2, 0.9);
  const Eigen::Matrix3d r = RandomRotation(gen);
  const Eigen::Vector3d t(0.5, 0.25, -1.0);
  CameraModel moved = cam;
  moved.rotation = r * cam.rotation;
  moved.translation = r * cam.translation + t;
  std::uniform_real_distribution<double> px(0.0, 600.0), depth(0.3, 2.0);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector2d p(px(gen), px(gen));
    const double d = depth(gen);
    const Eigen::Vector3d a = r * Deproject(p, d, cam) + t;
    EXPECT_LT((Deproject(p, d, moved) - a).norm(), 1e-9);
  }
}

TEST(ProjectTest, BehindCameraThrows) {
  const CameraModel cam = Intrinsics(500.0, 0.0, 0.0);
  EXPECT_THROW(Project(Eigen::Vector3d(0, 0, -1), cam), Error);
}

TEST(PregraspTest, OrientationProperties) {
  const Eigen::Matrix3d canonical = TopDownOrientation(0.0);
  EXPECT_TRUE(PregraspPose(Eigen::Vector3d::Zero(), 0.0).orientation.isApprox(canonical, 1e-15));
  // Approach axis is world -z.
  EXPECT_LT((canonical.col(2) - Eigen::Vector3d(0, 0, -1)).norm(), 1e-15);
  const Pose6D half = PregraspPose(Eigen::Vector3d(1, 2, 3), kPi);
  EXPECT_LT((half.orientation.col(0) + canonical.col(0)).norm(), 1e-12);
  EXPECT_LT((half.orientation.col(2) - canonical.col(2)).norm(), 1e-12);
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> yaw(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Matrix3d r = TopDownOrientation(yaw(gen));
    EXPECT_TRUE(IsRotation(r, 1e-12));
  }
  EXPECT_THROW(PregraspPose(Eigen::Vector3d(NAN, 0, 0), 0.0), Error);
}

TEST(TiltTest, CompositionAndAngle) {
  const Pose6D g = PregraspPose(Eigen::Vector3d(0.1, 0.2, 0.0), 0.7);
  const Pose6D twice = TiltPose(TiltPose(g, 45.0, 0.0), 45.0, 0.0);
  const Pose6D once = TiltPose(g, 90.0, 0.0);
  EXPECT_LT((twice.orientation - once.orientation).cwiseAbs().maxCoeff(), 1e-9);

  const Pose6D t = TiltPose(g, 45.0, 0.0);
  const double angle = std::acos(t.orientation.col(2).dot(Eigen::Vector3d(0, 0, -1)));
  EXPECT_NEAR(angle * 180.0 / kPi, 45.0, 1e-6);
  EXPECT_TRUE(IsRotation(t.orientation));
  // The approach axis leans toward the slide direction.
  const Eigen::Vector2d lean = t.orientation.col(2).head<2>().normalized();
  EXPECT_NEAR(lean.x(), std::cos(0.7), 1e-12);
  EXPECT_NEAR(lean.y(), std::sin(0.7), 1e-12);
}

TEST(TiltTest, ZOffset) {
  const Pose6D g = PregraspPose(Eigen::Vector3d(0.1, 0.2, 0.3), 0.0);
  const Pose6D t = TiltPose(g, 45.0, 0.02);
  EXPECT_DOUBLE_EQ(t.position.z(), 0.3 + 0.02);
  EXPECT_EQ(t.position.x(), 0.1);
  EXPECT_EQ(t.position.y(), 0.2);
  EXPECT_THROW(TiltPose(g, 0.0, 0.0), Error);
  EXPECT_THROW(TiltPose(g, 91.0, 0.0), Error);
}

TEST(SlidePlanTest, Offsets) {
  const Pose6D g = PregraspPose(Eigen::Vector3d(0.3, 0.2, 0.05), 0.0);
  const SlidePlan p = MakeSlidePlan(g, 0.0, 0.05, 0.05);
  EXPECT_NEAR(p.pre_slide.position.x(), 0.25, 1e-15);
  EXPECT_NEAR(p.post_slide.position.x(), 0.35, 1e-15);
  EXPECT_EQ(p.pre_slide.position.y(), 0.2);
  EXPECT_EQ(p.post_slide.position.z(), 0.05);
  EXPECT_EQ(p.pre_slide.orientation, g.orientation);
  EXPECT_EQ(p.post_slide.orientation, g.orientation);
  EXPECT_EQ(p.pinch_point, g.position);
  EXPECT_THROW(MakeSlidePlan(g, 0.0, 0.0, 0.05), Error);
}

TEST(SlidePlanTest, MidpointForEqualOffsets) {
  std::mt19937 gen(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double yaw = 4.0 * u(gen);
    const Pose6D g = PregraspPose(Eigen::Vector3d(u(gen), u(gen), u(gen)), yaw);
    const double off = 0.01 + std::abs(u(gen));
    const SlidePlan p = MakeSlidePlan(g, yaw, off, off);
    EXPECT_LT((0.5 * (p.pre_slide.position + p.post_slide.position) - g.position).norm(), 1e-15);
    EXPECT_EQ(p.pre_slide.position.z(), p.post_slide.position.z());
  }
}

TEST(ImageToWorldTest, NadirCameraMapsThroughYaw) {
  CameraModel cam = CameraModel::Nadir(0.3, 0.3, 0.7);
  // Rotate the camera about world z; image angles shift by the same yaw.
  for (double cam_yaw : {0.0, 0.4, -1.3, 2.9}) {
    CameraModel c = cam;
    c.rotation = Eigen::AngleAxisd(cam_yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix() * cam.rotation;
    for (double a : {0.0, 0.5, 2.0, -2.5}) {
      const double world = ImageToWorldAngle(Eigen::Vector2d(100, 50), a, 0.7, c);
      // Image y points along world -y for this camera, so angles mirror.
      EXPECT_NEAR(std::remainder(world - (cam_yaw - a), 2 * kPi), 0.0, 1e-9);
    }
  }
}

TEST(PlanTest, SlidingGraspSequence) {
  const CameraModel cam = CameraModel::Nadir(0.3, 0.3, 0.7);
  const DepthImage depth(640, 576, 0.698);
  const GraspPlan plan = PlanSlidingGrasp(Pixel{320, 288}, 0.0, depth, cam);
  EXPECT_NEAR((plan.point - Eigen::Vector3d(0.3, 0.3, 0.002)).norm(), 0.0, 1e-12);
  EXPECT_NEAR(plan.world_yaw, 0.0, 1e-12);
  EXPECT_NEAR(plan.pregrasp.position.z(), 0.002 + 0.015, 1e-12);
  EXPECT_NEAR(plan.slide.pre_slide.position.x(), 0.3 - 0.06, 1e-12);
  EXPECT_NEAR(plan.slide.post_slide.position.x(), 0.3 + 0.03, 1e-12);
  const auto q = plan.pregrasp.Quaternion();
  EXPECT_GE(q[0], 0.0);
  EXPECT_NEAR(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3], 1.0, 1e-12);
}

}  // namespace
}  // namespace clothgrasp
