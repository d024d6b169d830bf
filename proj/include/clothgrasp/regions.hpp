#pragma once

#include <filesystem>
#include <vector>

#include "clothgrasp/raster.hpp"

namespace clothgrasp {

enum class RegionClass { kCorner = 0, kOuterEdge = 1, kInnerEdge = 2 };

/// Independent (multi-label) per-pixel probabilities for the three cloth
/// regions. Overlapping outer and inner probabilities are legal.
class RegionProbMap {
 public:
  RegionProbMap() = default;
  RegionProbMap(int width, int height);
  /// Throws kParameter on size mismatch or values outside [0, 1].
  RegionProbMap(ScalarField corner, ScalarField outer, ScalarField inner);

  int width() const noexcept { return corner_.width(); }
  int height() const noexcept { return corner_.height(); }

  const ScalarField& plane(RegionClass c) const noexcept;
  /// Throws kParameter for values outside [0, 1].
  void set(RegionClass c, int x, int y, double probability);
  double get(RegionClass c, int x, int y) const noexcept { return plane(c)(x, y); }

 private:
  ScalarField corner_;
  ScalarField outer_;
  ScalarField inner_;
};

struct Thresholds {
  double corner = 0.5;
  double outer = 0.5;
  double inner = 0.5;
};

/// Boolean planes plus their pixel lists in row-major order.
class RegionMask {
 public:
  RegionMask() = default;
  RegionMask(int width, int height);
  RegionMask(BoolRaster corner, BoolRaster outer, BoolRaster inner);

  int width() const noexcept { return corner_.width(); }
  int height() const noexcept { return corner_.height(); }

  const BoolRaster& plane(RegionClass c) const noexcept;
  bool test(RegionClass c, int x, int y) const noexcept { return plane(c)(x, y) != 0; }

  const std::vector<Pixel>& corners() const noexcept { return corner_points_; }
  const std::vector<Pixel>& outer_edge() const noexcept { return outer_points_; }
  const std::vector<Pixel>& inner_edge() const noexcept { return inner_points_; }
  const std::vector<Pixel>& points(RegionClass c) const noexcept;

 private:
  void Enumerate();

  BoolRaster corner_;
  BoolRaster outer_;
  BoolRaster inner_;
  std::vector<Pixel> corner_points_;
  std::vector<Pixel> outer_points_;
  std::vector<Pixel> inner_points_;
};

/// plane = (probability >= tau), per class. Each tau must lie in (0, 1).
RegionMask ThresholdProbs(const RegionProbMap& probs, const Thresholds& tau = {});

/// 8-bit 3-channel PNG: channel 0 corner, 1 outer edge, 2 inner edge,
/// value v encodes probability v / 255.
void SaveProbMap(const RegionProbMap& probs, const std::filesystem::path& path);
/// Throws kFormat for anything other than an 8-bit 3-channel PNG.
RegionProbMap LoadProbMap(const std::filesystem::path& path);

/// Masks as probabilities 0 / 1, used to write ground-truth labels in the
/// same interchange format.
RegionProbMap ToProbMap(const RegionMask& mask);

}  // namespace clothgrasp
