#include "kernels_internal.hpp"

#include <cmath>

namespace clothgrasp::simd {
namespace {

inline int Clamp(int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); }

void ConvolveRows(const double* src, double* dst, int width, int height,
                  const double* taps, int radius) {
  for (int y = 0; y < height; ++y) {
    const double* row = src + static_cast<std::ptrdiff_t>(y) * width;
    double* out = dst + static_cast<std::ptrdiff_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) {
        acc += taps[t + radius] * row[Clamp(x + t, width - 1)];
      }
      out[x] = acc;
    }
  }
}

void ConvolveCols(const double* src, double* dst, int width, int height,
                  const double* taps, int radius) {
  for (int y = 0; y < height; ++y) {
    double* out = dst + static_cast<std::ptrdiff_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) {
        acc += taps[t + radius] * src[static_cast<std::ptrdiff_t>(Clamp(y + t, height - 1)) * width + x];
      }
      out[x] = acc;
    }
  }
}

void Sobel(const double* src, double* gx, double* gy, int width, int height) {
  for (int y = 0; y < height; ++y) {
    const double* up = src + static_cast<std::ptrdiff_t>(Clamp(y - 1, height - 1)) * width;
    const double* mid = src + static_cast<std::ptrdiff_t>(y) * width;
    const double* down = src + static_cast<std::ptrdiff_t>(Clamp(y + 1, height - 1)) * width;
    for (int x = 0; x < width; ++x) {
      const int l = Clamp(x - 1, width - 1);
      const int r = Clamp(x + 1, width - 1);
      gx[static_cast<std::ptrdiff_t>(y) * width + x] =
          (up[r] - up[l]) + 2.0 * (mid[r] - mid[l]) + (down[r] - down[l]);
      gy[static_cast<std::ptrdiff_t>(y) * width + x] =
          (down[l] - up[l]) + 2.0 * (down[x] - up[x]) + (down[r] - up[r]);
    }
  }
}

double TraceCovariance(const double* c, const double* s, std::size_t n) {
  const double c0 = c[0];
  const double s0 = s[0];
  double sum_c = 0.0;
  double sum_s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_c += c[i] - c0;
    sum_s += s[i] - s0;
  }
  const double mean_c = sum_c / static_cast<double>(n);
  const double mean_s = sum_s / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dc = (c[i] - c0) - mean_c;
    const double ds = (s[i] - s0) - mean_s;
    ss += dc * dc + ds * ds;
  }
  return ss / static_cast<double>(n - 1);
}

std::size_t CountPlaneInliers(const double* x, const double* y, const double* z,
                              std::size_t n, double nx, double ny, double nz, double d,
                              double threshold) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = nx * x[i];
    v = v + ny * y[i];
    v = v + nz * z[i];
    v = v + d;
    count += std::fabs(v) <= threshold ? 1 : 0;
  }
  return count;
}

}  // namespace

const Kernels& ScalarKernels() {
  static const Kernels kernels{ConvolveRows, ConvolveCols, Sobel, TraceCovariance,
                               CountPlaneInliers};
  return kernels;
}

}  // namespace clothgrasp::simd
