#pragma once

#include <array>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "clothgrasp/imaging.hpp"

namespace clothgrasp {

/// Pinhole intrinsics plus the rigid camera-to-world transform.
/// Camera frame: x right, y down, z along the optical axis.
struct CameraModel {
  double fx = 504.0;
  double fy = 504.0;
  double cx = 320.0;
  double cy = 288.0;
  int width = 640;
  int height = 576;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // camera -> world
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();   // camera centre in world

  /// Throws kParameter unless fx, fy > 0 and rotation is proper orthonormal (1e-9).
  void Validate() const;

  Eigen::Vector3d OpticalAxis() const { return rotation.col(2); }

  /// Camera looking straight down at the table plane z = 0 from `height_m`
  /// above (x_world, y_world). Image x follows world +x, image y world -y.
  static CameraModel Nadir(double x_world, double y_world, double height_m, int width = 640,
                           int height = 576, double focal = 504.0);
};

/// Rigid pose. Tool frame convention: z is the approach axis, y is the slide
/// direction, x completes a right-handed frame and is the tilt axis.
struct Pose6D {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d orientation = Eigen::Matrix3d::Identity();

  /// (w, x, y, z) with w >= 0.
  std::array<double, 4> Quaternion() const;
};

struct SlidePlan {
  Pose6D pre_slide;
  Pose6D post_slide;
  Eigen::Vector3d pinch_point = Eigen::Vector3d::Zero();
};

bool IsRotation(const Eigen::Matrix3d& r, double tol = 1e-9);

/// Camera-frame point ((u - cx) d / fx, (v - cy) d / fy, d) mapped to world.
Eigen::Vector3d Deproject(const Eigen::Vector2d& pixel, double depth, const CameraModel& cam);

struct DeprojectOptions {
  /// Replace an invalid depth with the median of the valid 3x3 neighbours.
  bool median_fallback = false;
};

/// Throws kInvalidDepth if the pixel has no usable depth.
Eigen::Vector3d Deproject(Pixel p, const DepthImage& depth, const CameraModel& cam,
                          DeprojectOptions options = {});

/// World point to pixel coordinates. Points behind the camera throw kParameter.
Eigen::Vector2d Project(const Eigen::Vector3d& world, const CameraModel& cam);

/// Angle in the workspace (world xy) plane of an image-plane direction
/// `image_angle` anchored at `pixel` with depth `depth`.
double ImageToWorldAngle(const Eigen::Vector2d& pixel, double image_angle, double depth,
                         const CameraModel& cam);

/// Top-down tool orientation (approach = world -z, slide axis = world +x)
/// rotated about world z by `yaw`.
Eigen::Matrix3d TopDownOrientation(double yaw);

Pose6D PregraspPose(const Eigen::Vector3d& point, double yaw);

/// Rotates about the pose's own x axis so the approach axis leans
/// `tilt_deg` toward the slide direction, then raises the position by
/// `z_offset` along world z. tilt_deg must lie in (0, 90].
Pose6D TiltPose(const Pose6D& pose, double tilt_deg, double z_offset);

/// pre = g - pre_offset * (cos yaw, sin yaw, 0); post = g + post_offset * (...).
SlidePlan MakeSlidePlan(const Pose6D& grasp, double yaw, double pre_offset, double post_offset);

struct ExecutionParams {
  double tilt_deg = 45.0;
  double z_offset = 0.015;
  double pre_offset = 0.06;
  double post_offset = 0.03;
};

struct GraspPlan {
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  double world_yaw = 0.0;
  Pose6D topdown;   // intermediate top-down pose
  Pose6D pregrasp;  // tilted pose
  SlidePlan slide;
};

GraspPlan PlanSlidingGrasp(Pixel pixel, double image_angle, const DepthImage& depth,
                           const CameraModel& cam, const ExecutionParams& params = {});

}  // namespace clothgrasp
