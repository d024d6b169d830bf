#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "clothgrasp/geometry.hpp"
#include "clothgrasp/graspsel.hpp"
#include "clothgrasp/imaging.hpp"

namespace clothgrasp {

/// Canny output. `direction` (gradient angle in (-pi, pi]) and `magnitude`
/// are meaningful only where `mask` is set; elsewhere they hold 0.
struct EdgeMask {
  BoolRaster mask;
  ScalarField direction;
  ScalarField magnitude;
  ScalarField gx;
  ScalarField gy;

  std::size_t count() const;
};

/// Gaussian blur, Sobel, non-maximum suppression along the gradient
/// (quantized to 8 directions), then hysteresis over 8-connected pixels.
/// Thresholds are fractions of the largest gradient magnitude in the image.
EdgeMask Canny(const ScalarField& field, double sigma, double low, double high);

/// R = det(M) - k trace(M)^2 with M the Gaussian-windowed structure tensor
/// of the Sobel gradients.
ScalarField HarrisResponse(const ScalarField& field, double k, double window_sigma);

struct PlaneFit {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();  // world frame, faces the camera
  double offset = 0.0;                                // normal . x + offset = 0
  BoolRaster inliers;
  std::size_t inlier_count = 0;

  double Distance(const Eigen::Vector3d& x) const { return std::abs(normal.dot(x) + offset); }
};

/// Seeded RANSAC over the deprojected valid pixels followed by a least
/// squares refit on the consensus set.
PlaneFit RansacPlane(const DepthImage& depth, const CameraModel& cam, int iterations,
                     double inlier_dist, std::uint64_t seed);

enum class BaselineMethod { kCannyDepth, kCannyColor, kSegmentEdge, kHarrisDepth, kHarrisColor };

std::string_view ToString(BaselineMethod method);
std::optional<BaselineMethod> ParseBaselineMethod(std::string_view name);
bool UsesColor(BaselineMethod method);

struct BaselineParams {
  double canny_sigma = 1.4;
  double canny_low = 0.04;
  double canny_high = 0.10;
  double canny_percentile = 0.90;
  double harris_k = 0.04;
  double harris_sigma = 1.5;
  int ransac_iterations = 500;
  double ransac_inlier_dist = 0.005;
};

/// Classical grasp proposers. Grasp directions point against the depth
/// gradient (from the table toward the cloth) for depth methods and along
/// the intensity gradient (toward the bright cloth) for colour methods.
/// rgb is required for colour methods, cam for kSegmentEdge.
/// Throws kNoCandidates when nothing is detected.
GraspConfig2D BaselineGrasp(BaselineMethod method, const DepthImage& depth, const RgbImage* rgb,
                            const CameraModel* cam, const BaselineParams& params,
                            std::uint64_t seed);

}  // namespace clothgrasp
