#include "clothgrasp/synthcloth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "clothgrasp/errors.hpp"
#include "clothgrasp/rng.hpp"

namespace clothgrasp {
namespace {

constexpr double kInsideTol = 1e-9;
constexpr int kMaxFoldAttempts = 100;

void StackInto(const std::vector<FoldLine>& folds, std::size_t n, const Eigen::Vector2d& xy,
               double side, std::vector<MaterialLayer>& out) {
  if (n == 0) {
    if (xy.x() >= -kInsideTol && xy.y() >= -kInsideTol && xy.x() <= side + kInsideTol &&
        xy.y() <= side + kInsideTol) {
      out.push_back({xy, Eigen::Matrix2d::Identity()});
    }
    return;
  }
  const FoldLine& fold = folds[n - 1];
  const double s = fold.Side(xy);
  if (s > 0.0) return;
  StackInto(folds, n - 1, xy, side, out);
  if (s < 0.0) {
    const std::size_t start = out.size();
    StackInto(folds, n - 1, fold.Reflect(xy), side, out);
    std::reverse(out.begin() + static_cast<std::ptrdiff_t>(start), out.end());
    const Eigen::Matrix2d r = fold.ReflectLinear();
    for (std::size_t i = start; i < out.size(); ++i) out[i].linear = r * out[i].linear;
  }
}

Eigen::Vector2d ForwardMap(const std::vector<FoldLine>& folds, Eigen::Vector2d xy) {
  for (const FoldLine& f : folds) {
    if (f.Side(xy) > 0.0) xy = f.Reflect(xy);
  }
  return xy;
}

void RecomputeLayers(ClothModel& cloth) {
  std::vector<MaterialLayer> stack;
  for (std::size_t i = 0; i < cloth.vertex_count(); ++i) {
    stack.clear();
    StackInto(cloth.folds, cloth.folds.size(), cloth.local[i], cloth.side, stack);
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < stack.size(); ++j) {
      const double d = (stack[j].uv - cloth.uv[i]).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    cloth.layer[i] = best;
  }
}

struct BandLabels {
  bool outer = false;
  bool inner = false;
  bool corner = false;
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();  // material inward normal, valid if outer
};

BandLabels Classify(const Eigen::Vector2d& uv, double side) {
  const double u = std::clamp(uv.x(), 0.0, side);
  const double v = std::clamp(uv.y(), 0.0, side);
  const double d[4] = {u, side - u, v, side - v};
  const Eigen::Vector2d n[4] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
  const double db = *std::min_element(d, d + 4);
  BandLabels out;
  out.outer = db < kOuterBand;
  out.inner = db >= kOuterBand && db < kInnerBand;
  out.corner = std::min(u, side - u) < kCornerSize && std::min(v, side - v) < kCornerSize;
  if (out.outer) {
    for (int i = 0; i < 4; ++i) {
      if (d[i] - db <= 1e-12) out.normal += n[i];
    }
    out.normal.normalize();
  }
  return out;
}

// Ray through a pixel centre, in world coordinates, scaled so that the
// camera-frame depth of C + t * d equals t.
struct Ray {
  Eigen::Vector3d origin;
  Eigen::Vector3d dir;

  std::optional<double> HitHeight(double z) const {
    if (std::abs(dir.z()) < 1e-12) return std::nullopt;
    const double t = (z - origin.z()) / dir.z();
    if (!(t > 0.0)) return std::nullopt;
    return t;
  }
  Eigen::Vector3d At(double t) const { return origin + t * dir; }
};

}  // namespace

double FoldLine::Side(const Eigen::Vector2d& xy) const {
  const Eigen::Vector2d r = xy - point;
  return direction.x() * r.y() - direction.y() * r.x();
}

Eigen::Vector2d FoldLine::Reflect(const Eigen::Vector2d& xy) const {
  const Eigen::Vector2d r = xy - point;
  const Eigen::Vector2d along = direction * direction.dot(r);
  return point + 2.0 * along - r;
}

Eigen::Matrix2d FoldLine::ReflectLinear() const {
  return 2.0 * direction * direction.transpose() - Eigen::Matrix2d::Identity();
}

Eigen::Matrix2d Placement::Rotation() const {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

Eigen::Vector2d Placement::Apply(const Eigen::Vector2d& local) const {
  return Rotation() * local + offset;
}

Eigen::Vector2d Placement::Inverse(const Eigen::Vector2d& world) const {
  return Rotation().transpose() * (world - offset);
}

Eigen::Vector3d ClothModel::WorldPosition(std::size_t i) const {
  const Eigen::Vector2d xy = placement.Apply(local[i]);
  return {xy.x(), xy.y(), (layer[i] + 1) * thickness};
}

std::vector<MaterialLayer> ClothModel::StackAt(const Eigen::Vector2d& local_xy) const {
  std::vector<MaterialLayer> out;
  StackInto(folds, folds.size(), local_xy, side, out);
  return out;
}

double ClothModel::MeshArea() const {
  double area = 0.0;
  const auto at = [&](int i, int j) {
    return WorldPosition(static_cast<std::size_t>(j * resolution + i));
  };
  for (int j = 0; j + 1 < resolution; ++j) {
    for (int i = 0; i + 1 < resolution; ++i) {
      const Eigen::Vector3d a = at(i, j), b = at(i + 1, j), c = at(i, j + 1), d = at(i + 1, j + 1);
      area += 0.5 * (b - a).cross(d - a).norm() + 0.5 * (d - a).cross(c - a).norm();
    }
  }
  return area;
}

ClothModel MakeFlat(double side, int resolution, double thickness) {
  if (resolution < 2) Throw(ErrorKind::kParameter, "cloth resolution must be >= 2");
  if (!(side > 0.0)) Throw(ErrorKind::kParameter, "cloth side must be > 0");
  if (!(thickness > 0.0)) Throw(ErrorKind::kParameter, "cloth thickness must be > 0");
  ClothModel cloth;
  cloth.side = side;
  cloth.thickness = thickness;
  cloth.resolution = resolution;
  const std::size_t n = static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
  cloth.uv.reserve(n);
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < resolution; ++i) {
      cloth.uv.emplace_back(side * i / (resolution - 1), side * j / (resolution - 1));
    }
  }
  cloth.local = cloth.uv;
  cloth.layer.assign(n, 0);
  return cloth;
}

ClothModel ApplyFold(const ClothModel& cloth, const FoldLine& line) {
  if (std::abs(line.direction.norm() - 1.0) > 1e-9) {
    Throw(ErrorKind::kParameter, "fold direction must be unit length");
  }
  ClothModel out = cloth;
  bool moved = false;
  for (Eigen::Vector2d& xy : out.local) {
    if (line.Side(xy) > 0.0) {
      xy = line.Reflect(xy);
      moved = true;
    }
  }
  if (!moved) return out;
  out.folds.push_back(line);
  RecomputeLayers(out);
  return out;
}

std::string_view ToString(FailureReason reason) {
  switch (reason) {
    case FailureReason::kNone: return "None";
    case FailureReason::kMisdetection: return "Misdetection";
    case FailureReason::kDirectionError: return "DirectionError";
    case FailureReason::kBlockedApproach: return "BlockedApproach";
    case FailureReason::kNoCandidates: return "NoCandidates";
  }
  return "Unknown";
}

RenderResult Render(const ClothModel& cloth, const CameraModel& cam, double noise_sigma,
                    std::uint64_t seed) {
  cam.Validate();
  if (std::abs(cam.OpticalAxis().z()) < 1e-9) {
    Throw(ErrorKind::kParameter, "camera optical axis is parallel to the table");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    Throw(ErrorKind::kParameter, "noise sigma must be finite and >= 0");
  }
  const int w = cam.width;
  const int h = cam.height;
  std::vector<double> depth(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0.0);
  RgbImage rgb(w, h, kTableGray, kTableGray, kTableGray);
  GroundTruth truth{RegionMask(w, h),   Raster<int>(w, h, -1), ScalarField(w, h),
                    ScalarField(w, h),  BoolRaster(w, h, 0),   ScalarField(w, h)};
  BoolRaster corner(w, h, 0), outer(w, h, 0), inner(w, h, 0);

  std::vector<MaterialLayer> stack, probe;
  const auto stack_at = [&](const Eigen::Vector3d& world, std::vector<MaterialLayer>& out) {
    out.clear();
    StackInto(cloth.folds, cloth.folds.size(), cloth.placement.Inverse(world.head<2>()),
              cloth.side, out);
  };
  const Eigen::Matrix2d place = cloth.placement.Rotation();

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Eigen::Vector3d cam_dir((x - cam.cx) / cam.fx, (y - cam.cy) / cam.fy, 1.0);
      const Ray ray{cam.translation, cam.rotation * cam_dir};
      const std::optional<double> t_table = ray.HitHeight(0.0);
      if (!t_table) continue;
      const std::size_t idx = static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                              static_cast<std::size_t>(x);
      stack_at(ray.At(*t_table), stack);
      if (stack.empty()) {
        depth[idx] = *t_table;
        truth.clean_depth(x, y) = *t_table;
        continue;
      }
      // The visible surface sits at the top layer's height; re-query there
      // in case the ray is oblique.
      double t = *t_table;
      for (int iter = 0; iter < 3; ++iter) {
        const std::optional<double> t_top =
            ray.HitHeight(static_cast<double>(stack.size()) * cloth.thickness);
        if (!t_top) break;
        stack_at(ray.At(*t_top), probe);
        if (probe.empty()) break;
        t = *t_top;
        const bool settled = probe.size() == stack.size();
        std::swap(stack, probe);
        if (settled) break;
      }
      const MaterialLayer& top = stack.back();
      depth[idx] = t;
      truth.clean_depth(x, y) = t;
      truth.top_layer(x, y) = static_cast<int>(stack.size()) - 1;
      rgb.set(x, y, kClothGray, kClothGray, kClothGray);
      const BandLabels band = Classify(top.uv, cloth.side);
      corner(x, y) = band.corner;
      outer(x, y) = band.outer;
      inner(x, y) = band.inner;
      if (band.outer) {
        const Eigen::Vector2d n_world = place * (top.linear * band.normal);
        const Eigen::Vector3d hit = ray.At(t);
        const Eigen::Vector3d ahead = hit + 1e-3 * Eigen::Vector3d(n_world.x(), n_world.y(), 0.0);
        const Eigen::Vector2d d = Project(ahead, cam) - Project(hit, cam);
        const double norm = d.norm();
        if (norm > 0.0) {
          truth.dir_cos(x, y) = d.x() / norm;
          truth.dir_sin(x, y) = d.y() / norm;
          truth.dir_defined(x, y) = 1;
        }
      }
    }
  }
  truth.labels = RegionMask(std::move(corner), std::move(outer), std::move(inner));

  if (noise_sigma > 0.0) {
    Rng rng(seed);
    for (double& d : depth) {
      if (d > 0.0) d = std::max(1e-6, d + noise_sigma * rng.Normal());
    }
  }
  return {DepthImage(w, h, std::move(depth)), std::move(rgb), std::move(truth)};
}

SynthScene RandomScene(std::uint64_t seed, const SceneOptions& options) {
  if (options.min_folds < 0 || options.max_folds < options.min_folds) {
    Throw(ErrorKind::kParameter, "fold range must satisfy 0 <= min <= max");
  }
  Rng rng(seed);
  ClothModel cloth = MakeFlat(kClothSide, options.resolution);
  const int n_folds =
      options.min_folds + static_cast<int>(rng.UniformInt(
                              static_cast<std::uint64_t>(options.max_folds - options.min_folds + 1)));
  for (int i = 0; i < n_folds; ++i) {
    for (int attempt = 0; attempt < kMaxFoldAttempts; ++attempt) {
      const Eigen::Vector2d material(rng.Uniform(0.15, 0.85) * cloth.side,
                                     rng.Uniform(0.15, 0.85) * cloth.side);
      const double theta = rng.Uniform(0.0, 2.0 * std::numbers::pi);
      const FoldLine line{ForwardMap(cloth.folds, material),
                          Eigen::Vector2d(std::cos(theta), std::sin(theta))};
      const auto moved = std::count_if(cloth.local.begin(), cloth.local.end(),
                                       [&](const Eigen::Vector2d& p) { return line.Side(p) > 0.0; });
      if (moved == 0 || static_cast<std::size_t>(moved) == cloth.vertex_count()) continue;
      cloth = ApplyFold(cloth, line);
      break;
    }
  }

  cloth.placement.angle = rng.Uniform(0.0, 2.0 * std::numbers::pi);
  const Eigen::Matrix2d rot = cloth.placement.Rotation();
  Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  for (const Eigen::Vector2d& p : cloth.local) {
    const Eigen::Vector2d r = rot * p;
    lo = lo.cwiseMin(r);
    hi = hi.cwiseMax(r);
  }
  cloth.placement.offset = Eigen::Vector2d(rng.Uniform(-lo.x(), kWorkspaceSize - hi.x()),
                                           rng.Uniform(-lo.y(), kWorkspaceSize - hi.y()));

  RenderResult render = Render(cloth, options.cam, options.noise_sigma, MixSeed(seed, 1));
  SynthScene scene;
  scene.cloth = std::move(cloth);
  scene.cam = options.cam;
  scene.depth = std::move(render.depth);
  scene.rgb = std::move(render.rgb);
  scene.truth = std::move(render.truth);
  scene.seed = seed;
  scene.noise_sigma = options.noise_sigma;
  return scene;
}

GraspOutcome Evaluate(const GraspConfig2D& grasp, const SynthScene& scene, double dir_tol_deg) {
  const GroundTruth& gt = scene.truth;
  const Pixel p = grasp.point;
  GraspOutcome out;
  const RegionClass wanted =
      grasp.mode == GraspMode::kCorner ? RegionClass::kCorner : RegionClass::kOuterEdge;
  if (!gt.top_layer.contains(p) || !gt.on_cloth(p.x, p.y) || !gt.labels.test(wanted, p.x, p.y)) {
    out.reason = FailureReason::kMisdetection;
    return out;
  }
  if (!gt.dir_defined[p]) {
    out.reason = FailureReason::kDirectionError;
    out.angle_error_deg = 180.0;
    return out;
  }
  const double c = std::cos(grasp.angle_rad);
  const double s = std::sin(grasp.angle_rad);
  const double tc = gt.dir_cos[p];
  const double ts = gt.dir_sin[p];
  out.angle_error_deg =
      std::abs(std::atan2(c * ts - s * tc, c * tc + s * ts)) * 180.0 / std::numbers::pi;
  // Slack absorbs the round trip through atan2 for ground-truth grasps.
  if (out.angle_error_deg > dir_tol_deg + 1e-9) {
    out.reason = FailureReason::kDirectionError;
    return out;
  }
  const double focal = 0.5 * (scene.cam.fx + scene.cam.fy);
  const double reach_px = kFreeApproach * focal / gt.clean_depth[p];
  bool free = false;
  for (double t = 0.5; t <= reach_px + 1e-9; t += 0.5) {
    const int qx = static_cast<int>(std::lround(p.x - t * c));
    const int qy = static_cast<int>(std::lround(p.y - t * s));
    if (!gt.top_layer.contains(qx, qy) || !gt.on_cloth(qx, qy)) {
      free = true;
      break;
    }
  }
  if (!free) {
    out.reason = FailureReason::kBlockedApproach;
    return out;
  }
  out.success = true;
  return out;
}

const RegionMask& GroundTruthMasks(const SynthScene& scene) { return scene.truth.labels; }

std::optional<GraspConfig2D> GroundTruthGrasp(const SynthScene& scene, GraspMode mode) {
  const GroundTruth& gt = scene.truth;
  const RegionClass wanted =
      mode == GraspMode::kCorner ? RegionClass::kCorner : RegionClass::kOuterEdge;
  for (const Pixel& p : gt.labels.points(wanted)) {
    if (!gt.dir_defined[p]) continue;
    GraspConfig2D g;
    g.point = p;
    g.angle_rad = AngleOf(gt.dir_cos[p], gt.dir_sin[p]);
    g.mode = mode;
    g.method = "truth";
    if (Evaluate(g, scene, 0.0).success) return g;
  }
  return std::nullopt;
}

}  // namespace clothgrasp
