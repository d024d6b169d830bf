#include "clothgrasp/graspsel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "clothgrasp/errors.hpp"
#include "clothgrasp/rng.hpp"
#include "clothgrasp/simd.hpp"

namespace clothgrasp {
namespace {

const std::vector<Pixel>& CandidatePixels(const RegionMask& masks, GraspMode mode) {
  return mode == GraspMode::kCorner ? masks.corners() : masks.outer_edge();
}

std::string ModeSetName(GraspMode mode) {
  return mode == GraspMode::kCorner ? "corner" : "outer-edge";
}

// Candidate pixels whose direction is defined, i.e. not labelled inner edge.
std::vector<Pixel> DirectedPixels(const RegionMask& masks, GraspMode mode) {
  std::vector<Pixel> out;
  for (const Pixel& p : CandidatePixels(masks, mode)) {
    if (!masks.test(RegionClass::kInnerEdge, p.x, p.y)) out.push_back(p);
  }
  return out;
}

}  // namespace

std::string_view ToString(GraspMode mode) {
  return mode == GraspMode::kCorner ? "corner" : "edge";
}

double AngleOf(double cos_value, double sin_value) {
  const double a = std::atan2(sin_value, cos_value);
  return a <= -std::numbers::pi ? std::numbers::pi : a;
}

Pixel NearestInner(Pixel p, const NeighborIndex& inner) {
  if (inner.empty()) Throw(ErrorKind::kNoInnerEdge, "inner-edge set is empty");
  return inner.points()[inner.Nearest(p)];
}

Direction GraspDirection(Pixel p, Pixel q_star) {
  const double dx = static_cast<double>(q_star.x) - p.x;
  const double dy = static_cast<double>(q_star.y) - p.y;
  const double norm = std::hypot(dx, dy);
  if (norm == 0.0) Throw(ErrorKind::kZeroVector, "grasp point coincides with its inner-edge match");
  return {dx / norm, dy / norm};
}

double TraceCovariance(std::span<const double> cos_values, std::span<const double> sin_values) {
  if (cos_values.size() != sin_values.size()) {
    Throw(ErrorKind::kParameter, "cos and sin sample counts differ");
  }
  if (cos_values.size() < 2) {
    Throw(ErrorKind::kInsufficientPoints, "directional variance needs at least two samples");
  }
  return simd::Active().trace_covariance(cos_values.data(), sin_values.data(), cos_values.size());
}

double DirectionalUncertainty(Pixel p, std::span<const GraspCandidate> candidates, std::size_t k) {
  if (k < 2) Throw(ErrorKind::kParameter, "neighbourhood size k must be >= 2");
  if (candidates.size() < 2) {
    Throw(ErrorKind::kInsufficientPoints, "directional uncertainty needs at least two candidates");
  }
  std::vector<Pixel> pixels;
  pixels.reserve(candidates.size());
  for (const auto& c : candidates) pixels.push_back(c.p);
  const NeighborIndex index(pixels);
  const std::vector<std::size_t> nearest = index.KNearest(p, k);
  std::vector<double> cs, ss;
  cs.reserve(nearest.size());
  ss.reserve(nearest.size());
  for (std::size_t i : nearest) {
    cs.push_back(candidates[i].dir_cos);
    ss.push_back(candidates[i].dir_sin);
  }
  return TraceCovariance(cs, ss);
}

std::vector<GraspCandidate> EstimateCandidates(const RegionMask& masks, GraspMode mode,
                                               std::size_t k) {
  if (k < 2) Throw(ErrorKind::kParameter, "neighbourhood size k must be >= 2");
  if (CandidatePixels(masks, mode).empty()) {
    Throw(ErrorKind::kNoCandidates, "no " + ModeSetName(mode) + " pixels");
  }
  if (masks.inner_edge().empty()) Throw(ErrorKind::kNoCandidates, "no inner-edge pixels");

  const std::vector<Pixel> pixels = DirectedPixels(masks, mode);
  if (pixels.empty()) {
    Throw(ErrorKind::kNoCandidates, "every " + ModeSetName(mode) + " pixel is also inner edge");
  }
  if (pixels.size() < 2) {
    Throw(ErrorKind::kInsufficientPoints, "directional uncertainty needs at least two " +
                                              ModeSetName(mode) + " pixels");
  }

  const NeighborIndex inner(masks.inner_edge());
  std::vector<GraspCandidate> candidates(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    GraspCandidate& c = candidates[i];
    c.p = pixels[i];
    c.q_star = NearestInner(c.p, inner);
    const Direction d = GraspDirection(c.p, c.q_star);
    c.dir_cos = d.cos;
    c.dir_sin = d.sin;
  }

  const NeighborIndex neighbours(pixels);
  const auto trace = simd::Active().trace_covariance;
  std::vector<std::size_t> nearest;
  std::vector<double> cs(std::min(k, pixels.size()));
  std::vector<double> ss(cs.size());
  for (GraspCandidate& c : candidates) {
    neighbours.KNearest(c.p, k, nearest);
    for (std::size_t j = 0; j < nearest.size(); ++j) {
      cs[j] = candidates[nearest[j]].dir_cos;
      ss[j] = candidates[nearest[j]].dir_sin;
    }
    c.uncertainty = trace(cs.data(), ss.data(), nearest.size());
  }
  return candidates;
}

std::size_t ArgminUncertainty(std::span<const GraspCandidate> candidates) {
  if (candidates.empty()) Throw(ErrorKind::kNoCandidates, "no grasp candidates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const auto& a = candidates[i];
    const auto& b = candidates[best];
    if (a.uncertainty < b.uncertainty || (a.uncertainty == b.uncertainty && a.p < b.p)) best = i;
  }
  return best;
}

GraspConfig2D SelectGrasp(const RegionMask& masks, GraspMode mode, std::size_t k) {
  const std::vector<GraspCandidate> candidates = EstimateCandidates(masks, mode, k);
  const GraspCandidate& best = candidates[ArgminUncertainty(candidates)];
  return GraspConfig2D{best.p, AngleOf(best.dir_cos, best.dir_sin), best.uncertainty, mode, "ours"};
}

GraspConfig2D AblationNoDirectionPrediction(const RegionMask& masks, std::uint64_t seed,
                                            GraspMode mode) {
  const std::vector<Pixel>& pixels = CandidatePixels(masks, mode);
  if (pixels.empty()) Throw(ErrorKind::kNoCandidates, "no " + ModeSetName(mode) + " pixels");
  int min_x = pixels[0].x, max_x = pixels[0].x, min_y = pixels[0].y, max_y = pixels[0].y;
  for (const Pixel& p : pixels) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  Rng rng(seed);
  const Pixel p = pixels[rng.UniformInt(pixels.size())];
  const double dx = 0.5 * (min_x + max_x) - p.x;
  const double dy = 0.5 * (min_y + max_y) - p.y;
  const double norm = std::hypot(dx, dy);
  const double angle = norm == 0.0 ? 0.0 : AngleOf(dx / norm, dy / norm);
  return GraspConfig2D{p, angle, std::nullopt, mode, "nodP"};
}

GraspConfig2D AblationNoDirectionalUncertainty(const RegionMask& masks, std::uint64_t seed,
                                               GraspMode mode) {
  if (CandidatePixels(masks, mode).empty()) {
    Throw(ErrorKind::kNoCandidates, "no " + ModeSetName(mode) + " pixels");
  }
  if (masks.inner_edge().empty()) Throw(ErrorKind::kNoCandidates, "no inner-edge pixels");
  const std::vector<Pixel> pixels = DirectedPixels(masks, mode);
  if (pixels.empty()) {
    Throw(ErrorKind::kNoCandidates, "every " + ModeSetName(mode) + " pixel is also inner edge");
  }
  Rng rng(seed);
  const Pixel p = pixels[rng.UniformInt(pixels.size())];
  const NeighborIndex inner(masks.inner_edge());
  const Direction d = GraspDirection(p, NearestInner(p, inner));
  return GraspConfig2D{p, AngleOf(d.cos, d.sin), std::nullopt, mode, "nodU"};
}

}  // namespace clothgrasp
