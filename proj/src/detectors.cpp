#include "clothgrasp/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "clothgrasp/errors.hpp"
#include "clothgrasp/rng.hpp"
#include "clothgrasp/simd.hpp"

namespace clothgrasp {
namespace {

constexpr int kDx8[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
constexpr int kDy8[8] = {-1, -1, -1, 0, 0, 1, 1, 1};

// Offsets of the forward neighbour along each quantized gradient sector
// (0, 45, 90, 135 degrees).
constexpr int kSectorDx[4] = {1, 1, 0, -1};
constexpr int kSectorDy[4] = {0, 1, 1, 1};

int Sector(double gx, double gy) {
  double a = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
  if (a < 0.0) a += 180.0;
  if (a < 22.5 || a >= 157.5) return 0;
  if (a < 67.5) return 1;
  if (a < 112.5) return 2;
  return 3;
}

double Flip(double angle) { return AngleOf(-std::cos(angle), -std::sin(angle)); }

std::vector<Pixel> LargestComponent(const BoolRaster& mask) {
  Raster<int> label(mask.width(), mask.height(), -1);
  std::vector<Pixel> best;
  std::vector<Pixel> current;
  int next = 0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask(x, y) || label(x, y) >= 0) continue;
      current.clear();
      std::deque<Pixel> queue{{x, y}};
      label(x, y) = next;
      while (!queue.empty()) {
        const Pixel p = queue.front();
        queue.pop_front();
        current.push_back(p);
        for (int i = 0; i < 8; ++i) {
          const int nx = p.x + kDx8[i];
          const int ny = p.y + kDy8[i];
          if (mask.contains(nx, ny) && mask(nx, ny) && label(nx, ny) < 0) {
            label(nx, ny) = next;
            queue.push_back({nx, ny});
          }
        }
      }
      if (current.size() > best.size()) best = current;
      ++next;
    }
  }
  std::sort(best.begin(), best.end());
  return best;
}

}  // namespace

std::size_t EdgeMask::count() const {
  return static_cast<std::size_t>(std::count(mask.data().begin(), mask.data().end(), 1));
}

EdgeMask Canny(const ScalarField& field, double sigma, double low, double high) {
  if (!(low >= 0.0) || !(high >= low)) {
    Throw(ErrorKind::kParameter, "canny thresholds must satisfy 0 <= low <= high");
  }
  const ScalarField blurred = GaussianBlur(field, sigma);
  Gradients g = SobelGradients(blurred);
  const int w = field.width();
  const int h = field.height();

  ScalarField magnitude(w, h);
  double peak = 0.0;
  for (std::size_t i = 0; i < magnitude.size(); ++i) {
    magnitude.data()[i] = std::hypot(g.gx.data()[i], g.gy.data()[i]);
    peak = std::max(peak, magnitude.data()[i]);
  }

  EdgeMask out{BoolRaster(w, h, 0), ScalarField(w, h), ScalarField(w, h), std::move(g.gx),
               std::move(g.gy)};
  if (peak <= 0.0) return out;

  // 0 = suppressed, 1 = weak, 2 = strong
  Raster<std::uint8_t> level(w, h, 0);
  std::deque<Pixel> strong;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = magnitude(x, y);
      if (m <= 0.0) continue;
      const int s = Sector(out.gx(x, y), out.gy(x, y));
      const double forward = magnitude.clamped(x + kSectorDx[s], y + kSectorDy[s]);
      const double backward = magnitude.clamped(x - kSectorDx[s], y - kSectorDy[s]);
      // Strict on one side so a symmetric plateau keeps exactly one pixel.
      if (!(m > backward && m >= forward)) continue;
      const double normalized = m / peak;
      if (normalized >= high) {
        level(x, y) = 2;
        strong.push_back({x, y});
      } else if (normalized >= low) {
        level(x, y) = 1;
      }
    }
  }
  while (!strong.empty()) {
    const Pixel p = strong.front();
    strong.pop_front();
    out.mask[p] = 1;
    for (int i = 0; i < 8; ++i) {
      const int nx = p.x + kDx8[i];
      const int ny = p.y + kDy8[i];
      if (level.contains(nx, ny) && level(nx, ny) == 1) {
        level(nx, ny) = 2;
        strong.push_back({nx, ny});
      }
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!out.mask(x, y)) continue;
      out.direction(x, y) = AngleOf(out.gx(x, y), out.gy(x, y));
      out.magnitude(x, y) = magnitude(x, y);
    }
  }
  return out;
}

ScalarField HarrisResponse(const ScalarField& field, double k, double window_sigma) {
  if (!(k > 0.0) || !std::isfinite(k)) Throw(ErrorKind::kParameter, "harris k must be > 0");
  if (!(window_sigma > 0.0)) Throw(ErrorKind::kParameter, "harris window sigma must be > 0");
  const Gradients g = SobelGradients(field);
  const int w = field.width();
  const int h = field.height();
  ScalarField xx(w, h), xy(w, h), yy(w, h);
  for (std::size_t i = 0; i < xx.size(); ++i) {
    const double gx = g.gx.data()[i];
    const double gy = g.gy.data()[i];
    xx.data()[i] = gx * gx;
    xy.data()[i] = gx * gy;
    yy.data()[i] = gy * gy;
  }
  const ScalarField sxx = GaussianBlur(xx, window_sigma);
  const ScalarField sxy = GaussianBlur(xy, window_sigma);
  const ScalarField syy = GaussianBlur(yy, window_sigma);
  ScalarField response(w, h);
  for (std::size_t i = 0; i < response.size(); ++i) {
    const double a = sxx.data()[i];
    const double b = sxy.data()[i];
    const double c = syy.data()[i];
    const double trace = a + c;
    response.data()[i] = (a * c - b * b) - k * trace * trace;
  }
  return response;
}

PlaneFit RansacPlane(const DepthImage& depth, const CameraModel& cam, int iterations,
                     double inlier_dist, std::uint64_t seed) {
  if (iterations < 1) Throw(ErrorKind::kParameter, "ransac needs at least one iteration");
  if (!(inlier_dist > 0.0)) Throw(ErrorKind::kParameter, "inlier distance must be > 0");
  const int w = depth.width();
  const int h = depth.height();

  std::vector<double> xs, ys, zs;
  std::vector<Pixel> pixels;
  const std::size_t valid = depth.valid_count();
  xs.reserve(valid);
  ys.reserve(valid);
  zs.reserve(valid);
  pixels.reserve(valid);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!depth.is_valid(x, y)) continue;
      const Eigen::Vector3d p = Deproject(Eigen::Vector2d(x, y), depth(x, y), cam);
      xs.push_back(p.x());
      ys.push_back(p.y());
      zs.push_back(p.z());
      pixels.push_back({x, y});
    }
  }
  const std::size_t n = pixels.size();
  if (n < 3) Throw(ErrorKind::kDegenerateInput, "plane fitting needs at least 3 valid depth pixels");

  const auto count_inliers = simd::Active().count_plane_inliers;
  const auto point = [&](std::size_t i) { return Eigen::Vector3d(xs[i], ys[i], zs[i]); };

  Rng rng(seed);
  Eigen::Vector3d best_normal = Eigen::Vector3d::UnitZ();
  double best_offset = 0.0;
  std::size_t best_count = 0;
  bool have_model = false;
  constexpr int kMaxDegenerateDraws = 1000;
  for (int it = 0; it < iterations; ++it) {
    Eigen::Vector3d normal;
    int degenerate = 0;
    std::size_t a = 0;
    while (true) {
      a = rng.UniformInt(n);
      const std::size_t b = rng.UniformInt(n);
      const std::size_t c = rng.UniformInt(n);
      normal = (point(b) - point(a)).cross(point(c) - point(a));
      if (a != b && b != c && a != c && normal.norm() > 1e-12) break;
      if (++degenerate >= kMaxDegenerateDraws) {
        if (have_model) break;
        Throw(ErrorKind::kDegenerateInput, "valid depth points are collinear");
      }
    }
    if (degenerate >= kMaxDegenerateDraws) break;
    normal.normalize();
    const double offset = -normal.dot(point(a));
    const std::size_t count = count_inliers(xs.data(), ys.data(), zs.data(), n, normal.x(),
                                            normal.y(), normal.z(), offset, inlier_dist);
    if (!have_model || count > best_count) {
      best_normal = normal;
      best_offset = offset;
      best_count = count;
      have_model = true;
    }
  }

  // Least-squares refit on the consensus set.
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  std::size_t m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(best_normal.dot(point(i)) + best_offset) <= inlier_dist) {
      centroid += point(i);
      ++m;
    }
  }
  PlaneFit fit;
  fit.normal = best_normal;
  fit.offset = best_offset;
  if (m >= 3) {
    centroid /= static_cast<double>(m);
    Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(best_normal.dot(point(i)) + best_offset) <= inlier_dist) {
        const Eigen::Vector3d d = point(i) - centroid;
        scatter += d * d.transpose();
      }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(scatter);
    fit.normal = solver.eigenvectors().col(0).normalized();
    fit.offset = -fit.normal.dot(centroid);
  }
  if (fit.normal.dot(cam.translation) + fit.offset < 0.0) {
    fit.normal = -fit.normal;
    fit.offset = -fit.offset;
  }
  fit.inliers = BoolRaster(w, h, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (fit.Distance(point(i)) <= inlier_dist) {
      fit.inliers[pixels[i]] = 1;
      ++fit.inlier_count;
    }
  }
  return fit;
}

std::string_view ToString(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::kCannyDepth: return "canny-depth";
    case BaselineMethod::kCannyColor: return "canny-color";
    case BaselineMethod::kSegmentEdge: return "segment-edge";
    case BaselineMethod::kHarrisDepth: return "harris-depth";
    case BaselineMethod::kHarrisColor: return "harris-color";
  }
  return "unknown";
}

std::optional<BaselineMethod> ParseBaselineMethod(std::string_view name) {
  for (BaselineMethod m : {BaselineMethod::kCannyDepth, BaselineMethod::kCannyColor,
                           BaselineMethod::kSegmentEdge, BaselineMethod::kHarrisDepth,
                           BaselineMethod::kHarrisColor}) {
    if (ToString(m) == name) return m;
  }
  return std::nullopt;
}

bool UsesColor(BaselineMethod method) {
  return method == BaselineMethod::kCannyColor || method == BaselineMethod::kHarrisColor;
}

GraspConfig2D BaselineGrasp(BaselineMethod method, const DepthImage& depth, const RgbImage* rgb,
                            const CameraModel* cam, const BaselineParams& params,
                            std::uint64_t seed) {
  const bool color = UsesColor(method);
  if (color != (rgb != nullptr)) {
    Throw(ErrorKind::kParameter, std::string(ToString(method)) +
                                     (color ? " needs a colour image" : " takes no colour image"));
  }
  if (color && (rgb->width() != depth.width() || rgb->height() != depth.height())) {
    Throw(ErrorKind::kParameter, "colour and depth images differ in size");
  }
  const ScalarField field = color ? Grayscale(*rgb) : InpaintedDepth(depth);
  // Depth methods approach against the gradient, colour methods along it.
  const auto grasp_angle = [color](double gradient_angle) {
    return color ? gradient_angle : Flip(gradient_angle);
  };
  GraspConfig2D out;
  out.method = std::string(ToString(method));
  out.mode = (method == BaselineMethod::kHarrisDepth || method == BaselineMethod::kHarrisColor)
                 ? GraspMode::kCorner
                 : GraspMode::kEdge;
  Rng rng(seed);

  switch (method) {
    case BaselineMethod::kCannyDepth:
    case BaselineMethod::kCannyColor: {
      const EdgeMask edges = Canny(field, params.canny_sigma, params.canny_low, params.canny_high);
      std::vector<double> magnitudes;
      for (std::size_t i = 0; i < edges.mask.size(); ++i) {
        if (edges.mask.data()[i]) magnitudes.push_back(edges.magnitude.data()[i]);
      }
      if (magnitudes.empty()) Throw(ErrorKind::kNoCandidates, "canny found no edges");
      std::vector<double> sorted = magnitudes;
      std::sort(sorted.begin(), sorted.end());
      const double cut = sorted[static_cast<std::size_t>(
          std::floor(params.canny_percentile * static_cast<double>(sorted.size() - 1)))];
      std::vector<Pixel> candidates;
      for (int y = 0; y < field.height(); ++y) {
        for (int x = 0; x < field.width(); ++x) {
          if (edges.mask(x, y) && edges.magnitude(x, y) >= cut) candidates.push_back({x, y});
        }
      }
      const Pixel p = candidates[rng.UniformInt(candidates.size())];
      out.point = p;
      out.angle_rad = grasp_angle(edges.direction[p]);
      return out;
    }
    case BaselineMethod::kHarrisDepth:
    case BaselineMethod::kHarrisColor: {
      const ScalarField response = HarrisResponse(field, params.harris_k, params.harris_sigma);
      std::size_t best = 0;
      for (std::size_t i = 1; i < response.size(); ++i) {
        if (response.data()[i] > response.data()[best]) best = i;
      }
      if (!(response.data()[best] > 0.0)) Throw(ErrorKind::kNoCandidates, "harris found no corners");
      const Pixel p{static_cast<int>(best % static_cast<std::size_t>(field.width())),
                    static_cast<int>(best / static_cast<std::size_t>(field.width()))};
      const Gradients g = SobelGradients(GaussianBlur(field, params.harris_sigma));
      out.point = p;
      out.angle_rad = (g.gx[p] == 0.0 && g.gy[p] == 0.0) ? 0.0
                                                         : grasp_angle(AngleOf(g.gx[p], g.gy[p]));
      return out;
    }
    case BaselineMethod::kSegmentEdge: {
      if (cam == nullptr) Throw(ErrorKind::kParameter, "segment-edge needs a camera model");
      const PlaneFit plane = RansacPlane(depth, *cam, params.ransac_iterations,
                                         params.ransac_inlier_dist, rng.Next());
      BoolRaster outliers(depth.width(), depth.height(), 0);
      for (int y = 0; y < depth.height(); ++y) {
        for (int x = 0; x < depth.width(); ++x) {
          outliers(x, y) = depth.is_valid(x, y) && !plane.inliers(x, y);
        }
      }
      const std::vector<Pixel> component = LargestComponent(outliers);
      if (component.empty()) Throw(ErrorKind::kNoCandidates, "no off-plane segment");
      BoolRaster member(depth.width(), depth.height(), 0);
      for (const Pixel& p : component) member[p] = 1;
      std::vector<Pixel> border;
      for (const Pixel& p : component) {
        for (int i = 0; i < 8; ++i) {
          const int nx = p.x + kDx8[i];
          const int ny = p.y + kDy8[i];
          if (!member.contains(nx, ny) || !member(nx, ny)) {
            border.push_back(p);
            break;
          }
        }
      }
      const Pixel p = border[rng.UniformInt(border.size())];
      const Gradients g = SobelGradients(GaussianBlur(field, params.canny_sigma));
      out.point = p;
      out.angle_rad = (g.gx[p] == 0.0 && g.gy[p] == 0.0) ? 0.0
                                                         : grasp_angle(AngleOf(g.gx[p], g.gy[p]));
      return out;
    }
  }
  Throw(ErrorKind::kParameter, "unknown baseline method");
}

}  // namespace clothgrasp
