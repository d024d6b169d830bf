#include "clothgrasp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "clothgrasp/errors.hpp"

namespace clothgrasp {

bool IsRotation(const Eigen::Matrix3d& r, double tol) {
  if (!r.allFinite()) return false;
  const double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

void CameraModel::Validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) Throw(ErrorKind::kParameter, "focal lengths must be > 0");
  if (width <= 0 || height <= 0) Throw(ErrorKind::kParameter, "camera image size must be positive");
  if (!IsRotation(rotation)) Throw(ErrorKind::kParameter, "camera rotation is not a proper rotation");
  if (!translation.allFinite()) Throw(ErrorKind::kParameter, "camera translation is not finite");
}

CameraModel CameraModel::Nadir(double x_world, double y_world, double height_m, int width,
                               int height, double focal) {
  CameraModel cam;
  cam.fx = cam.fy = focal;
  cam.width = width;
  cam.height = height;
  cam.cx = width / 2.0;
  cam.cy = height / 2.0;
  cam.rotation << 1, 0, 0,
                  0, -1, 0,
                  0, 0, -1;
  cam.translation = Eigen::Vector3d(x_world, y_world, height_m);
  return cam;
}

std::array<double, 4> Pose6D::Quaternion() const {
  Eigen::Quaterniond q(orientation);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  return {q.w(), q.x(), q.y(), q.z()};
}

Eigen::Vector3d Deproject(const Eigen::Vector2d& pixel, double depth, const CameraModel& cam) {
  const Eigen::Vector3d in_camera((pixel.x() - cam.cx) * depth / cam.fx,
                                  (pixel.y() - cam.cy) * depth / cam.fy, depth);
  return cam.rotation * in_camera + cam.translation;
}

Eigen::Vector3d Deproject(Pixel p, const DepthImage& depth, const CameraModel& cam,
                          DeprojectOptions options) {
  if (p.x < 0 || p.y < 0 || p.x >= depth.width() || p.y >= depth.height()) {
    Throw(ErrorKind::kParameter, "pixel outside the depth image");
  }
  double d = depth(p.x, p.y);
  if (!(d > 0.0)) {
    if (!options.median_fallback) {
      Throw(ErrorKind::kInvalidDepth, "no depth at pixel (" + std::to_string(p.x) + ", " +
                                          std::to_string(p.y) + ")");
    }
    std::vector<double> valid;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int x = p.x + dx;
        const int y = p.y + dy;
        if (x >= 0 && y >= 0 && x < depth.width() && y < depth.height() && depth.is_valid(x, y)) {
          valid.push_back(depth(x, y));
        }
      }
    }
    if (valid.empty()) {
      Throw(ErrorKind::kInvalidDepth, "no valid depth in the 3x3 neighbourhood of (" +
                                          std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
    }
    std::sort(valid.begin(), valid.end());
    const std::size_t m = valid.size() / 2;
    d = valid.size() % 2 ? valid[m] : 0.5 * (valid[m - 1] + valid[m]);
  }
  return Deproject(Eigen::Vector2d(p.x, p.y), d, cam);
}

Eigen::Vector2d Project(const Eigen::Vector3d& world, const CameraModel& cam) {
  const Eigen::Vector3d c = cam.rotation.transpose() * (world - cam.translation);
  if (!(c.z() > 0.0)) Throw(ErrorKind::kParameter, "point is not in front of the camera");
  return {cam.fx * c.x() / c.z() + cam.cx, cam.fy * c.y() / c.z() + cam.cy};
}

double ImageToWorldAngle(const Eigen::Vector2d& pixel, double image_angle, double depth,
                         const CameraModel& cam) {
  const Eigen::Vector2d step(std::cos(image_angle), std::sin(image_angle));
  const Eigen::Vector3d a = Deproject(pixel, depth, cam);
  const Eigen::Vector3d b = Deproject(pixel + step, depth, cam);
  const Eigen::Vector2d in_plane = (b - a).head<2>();
  if (in_plane.norm() < 1e-12) {
    Throw(ErrorKind::kParameter, "image direction has no component in the workspace plane");
  }
  return std::atan2(in_plane.y(), in_plane.x());
}

Eigen::Matrix3d TopDownOrientation(double yaw) {
  Eigen::Matrix3d canonical;
  // columns: tool x = world +y, tool y (slide) = world +x, tool z (approach) = world -z
  canonical << 0, 1, 0,
               1, 0, 0,
               0, 0, -1;
  return Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix() * canonical;
}

Pose6D PregraspPose(const Eigen::Vector3d& point, double yaw) {
  if (!point.allFinite()) Throw(ErrorKind::kParameter, "pre-grasp point is not finite");
  return Pose6D{point, TopDownOrientation(yaw)};
}

Pose6D TiltPose(const Pose6D& pose, double tilt_deg, double z_offset) {
  if (!(tilt_deg > 0.0) || tilt_deg > 90.0) {
    Throw(ErrorKind::kParameter, "tilt must lie in (0, 90] degrees");
  }
  const double tilt = tilt_deg * std::numbers::pi / 180.0;
  // Negative angle about tool x turns the approach axis (tool z) toward tool y.
  const Eigen::Matrix3d about_x = Eigen::AngleAxisd(-tilt, Eigen::Vector3d::UnitX()).toRotationMatrix();
  Pose6D out;
  out.orientation = pose.orientation * about_x;
  out.position = pose.position + Eigen::Vector3d(0.0, 0.0, z_offset);
  return out;
}

SlidePlan MakeSlidePlan(const Pose6D& grasp, double yaw, double pre_offset, double post_offset) {
  if (!(pre_offset > 0.0) || !(post_offset > 0.0)) {
    Throw(ErrorKind::kParameter, "slide offsets must be > 0");
  }
  const Eigen::Vector3d along(std::cos(yaw), std::sin(yaw), 0.0);
  SlidePlan plan;
  plan.pre_slide = Pose6D{grasp.position - pre_offset * along, grasp.orientation};
  plan.post_slide = Pose6D{grasp.position + post_offset * along, grasp.orientation};
  plan.pinch_point = grasp.position;
  return plan;
}

GraspPlan PlanSlidingGrasp(Pixel pixel, double image_angle, const DepthImage& depth,
                           const CameraModel& cam, const ExecutionParams& params) {
  cam.Validate();
  GraspPlan plan;
  plan.point = Deproject(pixel, depth, cam, DeprojectOptions{.median_fallback = true});
  const double d = (cam.rotation.transpose() * (plan.point - cam.translation)).z();
  plan.world_yaw = ImageToWorldAngle(Eigen::Vector2d(pixel.x, pixel.y), image_angle, d, cam);
  plan.topdown = PregraspPose(plan.point, plan.world_yaw);
  plan.pregrasp = TiltPose(plan.topdown, params.tilt_deg, params.z_offset);
  plan.slide = MakeSlidePlan(plan.pregrasp, plan.world_yaw, params.pre_offset, params.post_offset);
  return plan;
}

}  // namespace clothgrasp
