#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "clothgrasp/geometry.hpp"
#include "clothgrasp/graspsel.hpp"
#include "clothgrasp/imaging.hpp"
#include "clothgrasp/regions.hpp"

namespace clothgrasp {

inline constexpr double kClothSide = 0.3048;
inline constexpr double kClothThickness = 0.002;
inline constexpr double kOuterBand = 0.015;
inline constexpr double kInnerBand = 0.030;
inline constexpr double kCornerSize = 0.030;
inline constexpr double kWorkspaceSize = 0.6;

/// Straight fold line in the cloth's local (pre-placement) frame. Material
/// strictly to the left of `direction` (cross(direction, x - point) > 0) is
/// folded over onto the right side.
struct FoldLine {
  Eigen::Vector2d point = Eigen::Vector2d::Zero();
  Eigen::Vector2d direction = Eigen::Vector2d::UnitX();

  double Side(const Eigen::Vector2d& xy) const;
  Eigen::Vector2d Reflect(const Eigen::Vector2d& xy) const;
  /// Linear part of the reflection.
  Eigen::Matrix2d ReflectLinear() const;
};

/// One piece of material lying over a table point: its material coordinate
/// and the accumulated linear map from material directions to local
/// directions.
struct MaterialLayer {
  Eigen::Vector2d uv;
  Eigen::Matrix2d linear;
};

/// In-plane rigid placement of the local frame in the world workspace.
struct Placement {
  double angle = 0.0;
  Eigen::Vector2d offset = Eigen::Vector2d::Zero();

  Eigen::Vector2d Apply(const Eigen::Vector2d& local) const;
  Eigen::Vector2d Inverse(const Eigen::Vector2d& world) const;
  Eigen::Matrix2d Rotation() const;
};

/// Square cloth as a vertex grid plus the fold history that produced its
/// current configuration. The table is the world plane z = 0.
struct ClothModel {
  double side = kClothSide;
  double thickness = kClothThickness;
  int resolution = 2;                  // vertices per side
  std::vector<Eigen::Vector2d> uv;     // material coordinates, never change
  std::vector<Eigen::Vector2d> local;  // folded positions before placement
  std::vector<int> layer;
  std::vector<FoldLine> folds;
  Placement placement;

  std::size_t vertex_count() const { return uv.size(); }
  Eigen::Vector3d WorldPosition(std::size_t i) const;
  /// Material stacked over a local point, bottom layer first.
  std::vector<MaterialLayer> StackAt(const Eigen::Vector2d& local_xy) const;
  /// Sum of the grid triangle areas in world space.
  double MeshArea() const;
};

ClothModel MakeFlat(double side = kClothSide, int resolution = 61,
                    double thickness = kClothThickness);

/// Reflects every vertex strictly on the fold's positive side; the moved
/// material is stacked, in reversed order, on top of what already lies at
/// its destination. direction must be unit length.
ClothModel ApplyFold(const ClothModel& cloth, const FoldLine& line);

/// Per-pixel oracle raster. Directions are unit image-plane vectors and are
/// defined exactly where the top layer is outer edge.
struct GroundTruth {
  RegionMask labels;
  Raster<int> top_layer;            // -1 on the bare table
  ScalarField dir_cos;
  ScalarField dir_sin;
  BoolRaster dir_defined;
  ScalarField clean_depth;          // noise-free depth, metres

  bool on_cloth(int x, int y) const { return top_layer(x, y) >= 0; }
};

struct SynthScene {
  ClothModel cloth;
  CameraModel cam;
  DepthImage depth;
  RgbImage rgb;
  GroundTruth truth;
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;
};

struct SceneOptions {
  int min_folds = 1;
  int max_folds = 3;
  double noise_sigma = 0.002;
  int resolution = 61;
  CameraModel cam = CameraModel::Nadir(0.3, 0.3, 0.7);
};

inline constexpr std::uint8_t kClothGray = 230;
inline constexpr std::uint8_t kTableGray = 60;

struct RenderResult {
  DepthImage depth;
  RgbImage rgb;
  GroundTruth truth;
};

/// Ray casts every pixel centre against the table plane and the folded
/// cloth. Throws kParameter for a camera whose optical axis is parallel to
/// the table.
RenderResult Render(const ClothModel& cloth, const CameraModel& cam, double noise_sigma,
                    std::uint64_t seed);

/// Flat cloth, a seeded number of random folds, then a random rotation and
/// translation inside the workspace, rendered with depth noise.
SynthScene RandomScene(std::uint64_t seed, const SceneOptions& options = {});

enum class FailureReason { kNone, kMisdetection, kDirectionError, kBlockedApproach, kNoCandidates };

std::string_view ToString(FailureReason reason);

struct GraspOutcome {
  bool success = false;
  FailureReason reason = FailureReason::kNone;
  double angle_error_deg = 0.0;
};

inline constexpr double kDefaultDirectionTolDeg = 45.0;
/// Free travel required behind the grasp point along the approach.
inline constexpr double kFreeApproach = 0.02;

/// Checks, in order: the pixel's top-layer label matches the grasp mode,
/// the direction is within dir_tol_deg of the true inward direction, and
/// marching backwards from the pixel leaves the cloth silhouette within
/// kFreeApproach metres.
GraspOutcome Evaluate(const GraspConfig2D& grasp, const SynthScene& scene,
                      double dir_tol_deg = kDefaultDirectionTolDeg);

/// Ground-truth labels as masks (the input our selector receives in
/// benchmarks).
const RegionMask& GroundTruthMasks(const SynthScene& scene);

/// First pixel in row-major order whose true label and direction give a
/// successful grasp, or nullopt if the scene has none.
std::optional<GraspConfig2D> GroundTruthGrasp(const SynthScene& scene, GraspMode mode);

}  // namespace clothgrasp
