#pragma once

#include <cstddef>
#include <string_view>

namespace clothgrasp::simd {

enum class Level { kScalar, kAvx2, kNeon };

std::string_view ToString(Level level);

/// Raw inner loops. Every variant implements the same contract as the scalar
/// reference; tests compare them directly.
struct Kernels {
  /// Horizontal 1D convolution with clamp-to-edge. taps has 2*radius+1 entries.
  void (*convolve_rows)(const double* src, double* dst, int width, int height,
                        const double* taps, int radius);
  /// Vertical counterpart of convolve_rows.
  void (*convolve_cols)(const double* src, double* dst, int width, int height,
                        const double* taps, int radius);
  /// 3x3 Sobel with clamp-to-edge; width and height >= 1.
  void (*sobel)(const double* src, double* gx, double* gy, int width, int height);
  /// Var(cos) + Var(sin) with the n-1 denominator, n >= 2. Samples are
  /// shifted by the first element before accumulation, so identical inputs
  /// give exactly 0.
  double (*trace_covariance)(const double* cos_values, const double* sin_values,
                             std::size_t n);
  /// Number of i with |nx*x[i] + ny*y[i] + nz*z[i] + d| <= threshold. Evaluated
  /// left to right without contraction, so all variants agree exactly.
  std::size_t (*count_plane_inliers)(const double* x, const double* y, const double* z,
                                     std::size_t n, double nx, double ny, double nz,
                                     double d, double threshold);
};

/// Best level supported by the running CPU.
Level DetectedLevel();
/// Level currently used by Active(). Defaults to DetectedLevel().
Level ActiveLevel();
/// Selects a level; returns false (and changes nothing) if the CPU or the
/// build lacks it.
bool SetActiveLevel(Level level);
bool IsSupported(Level level);

const Kernels& Active();
/// Kernels for a given level; falls back to scalar when unsupported.
const Kernels& ForLevel(Level level);

}  // namespace clothgrasp::simd
