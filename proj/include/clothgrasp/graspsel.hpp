#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clothgrasp/neighbor_index.hpp"
#include "clothgrasp/raster.hpp"
#include "clothgrasp/regions.hpp"

namespace clothgrasp {

enum class GraspMode { kEdge, kCorner };

std::string_view ToString(GraspMode mode);

/// Unit image-plane direction (x right, y down).
struct Direction {
  double cos = 1.0;
  double sin = 0.0;
};

/// An outer-edge (or corner) pixel matched to its closest inner-edge pixel.
struct GraspCandidate {
  Pixel p;
  Pixel q_star;
  double dir_cos = 1.0;
  double dir_sin = 0.0;
  double uncertainty = 0.0;
};

struct GraspConfig2D {
  Pixel point;
  double angle_rad = 0.0;               // (-pi, pi]
  std::optional<double> uncertainty;    // empty when the method does not estimate it
  GraspMode mode = GraspMode::kEdge;
  std::string method;
};

inline constexpr std::size_t kDefaultNeighbors = 100;

/// atan2 folded into (-pi, pi].
double AngleOf(double cos_value, double sin_value);

/// Closest inner-edge pixel; ties go to the earliest pixel in row-major order.
/// Throws kNoInnerEdge when the index is empty.
Pixel NearestInner(Pixel p, const NeighborIndex& inner);

/// Unit vector from p toward q_star. Throws kZeroVector when they coincide.
Direction GraspDirection(Pixel p, Pixel q_star);

/// Var(cos) + Var(sin) of the given samples with the n-1 denominator.
/// Needs at least two samples (kInsufficientPoints otherwise).
double TraceCovariance(std::span<const double> cos_values, std::span<const double> sin_values);

/// Uncertainty of p: trace of the sample covariance of the directions of the
/// N = min(k, |candidates|) candidates closest to p (p included when it is a
/// candidate itself).
double DirectionalUncertainty(Pixel p, std::span<const GraspCandidate> candidates, std::size_t k);

/// Matches every candidate pixel (outer edge, or corners in corner mode) to
/// its closest inner-edge pixel, drops pixels that are themselves inner edge
/// (direction undefined) and fills in the uncertainty. Output is row-major.
std::vector<GraspCandidate> EstimateCandidates(const RegionMask& masks, GraspMode mode,
                                               std::size_t k = kDefaultNeighbors);

/// Lowest uncertainty, ties to the earliest row-major pixel. Empty input
/// throws kNoCandidates.
std::size_t ArgminUncertainty(std::span<const GraspCandidate> candidates);

/// Minimum directional-uncertainty grasp.
GraspConfig2D SelectGrasp(const RegionMask& masks, GraspMode mode = GraspMode::kEdge,
                          std::size_t k = kDefaultNeighbors);

/// Random candidate pixel; direction toward the centre of the candidate
/// set's bounding box, or (1, 0) when the pixel sits on the centre.
GraspConfig2D AblationNoDirectionPrediction(const RegionMask& masks, std::uint64_t seed,
                                            GraspMode mode = GraspMode::kEdge);

/// Random candidate pixel with its closest-inner-edge direction.
GraspConfig2D AblationNoDirectionalUncertainty(const RegionMask& masks, std::uint64_t seed,
                                               GraspMode mode = GraspMode::kEdge);

}  // namespace clothgrasp
