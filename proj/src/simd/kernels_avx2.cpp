// Built with -mavx2 -mfma. Keep this file free of standard-library templates:
// anything instantiated here could be merged with the baseline copies by the
// linker and leak AVX instructions into code that runs before dispatch.

#include "kernels_internal.hpp"

#include <immintrin.h>

namespace clothgrasp::simd {
namespace {

inline int Clamp(int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); }

inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

double ConvolvePoint(const double* row, int x, int width, const double* taps, int radius) {
  double acc = 0.0;
  for (int t = -radius; t <= radius; ++t) acc += taps[t + radius] * row[Clamp(x + t, width - 1)];
  return acc;
}

void ConvolveRows(const double* src, double* dst, int width, int height,
                  const double* taps, int radius) {
  for (int y = 0; y < height; ++y) {
    const double* row = src + static_cast<long>(y) * width;
    double* out = dst + static_cast<long>(y) * width;
    int x = 0;
    for (; x < radius && x < width; ++x) out[x] = ConvolvePoint(row, x, width, taps, radius);
    for (; x + 4 + radius <= width; x += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (int t = -radius; t <= radius; ++t) {
        acc = _mm256_fmadd_pd(_mm256_set1_pd(taps[t + radius]), _mm256_loadu_pd(row + x + t), acc);
      }
      _mm256_storeu_pd(out + x, acc);
    }
    for (; x < width; ++x) out[x] = ConvolvePoint(row, x, width, taps, radius);
  }
}

void ConvolveCols(const double* src, double* dst, int width, int height,
                  const double* taps, int radius) {
  for (int y = 0; y < height; ++y) {
    double* out = dst + static_cast<long>(y) * width;
    int x = 0;
    for (; x + 4 <= width; x += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (int t = -radius; t <= radius; ++t) {
        const double* row = src + static_cast<long>(Clamp(y + t, height - 1)) * width;
        acc = _mm256_fmadd_pd(_mm256_set1_pd(taps[t + radius]), _mm256_loadu_pd(row + x), acc);
      }
      _mm256_storeu_pd(out + x, acc);
    }
    for (; x < width; ++x) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) {
        acc += taps[t + radius] * src[static_cast<long>(Clamp(y + t, height - 1)) * width + x];
      }
      out[x] = acc;
    }
  }
}

void SobelPoint(const double* up, const double* mid, const double* down, int x, int width,
                double* gx, double* gy) {
  const int l = Clamp(x - 1, width - 1);
  const int r = Clamp(x + 1, width - 1);
  *gx = (up[r] - up[l]) + 2.0 * (mid[r] - mid[l]) + (down[r] - down[l]);
  *gy = (down[l] - up[l]) + 2.0 * (down[x] - up[x]) + (down[r] - up[r]);
}

void Sobel(const double* src, double* gx, double* gy, int width, int height) {
  const __m256d two = _mm256_set1_pd(2.0);
  for (int y = 0; y < height; ++y) {
    const double* up = src + static_cast<long>(Clamp(y - 1, height - 1)) * width;
    const double* mid = src + static_cast<long>(y) * width;
    const double* down = src + static_cast<long>(Clamp(y + 1, height - 1)) * width;
    double* ox = gx + static_cast<long>(y) * width;
    double* oy = gy + static_cast<long>(y) * width;
    int x = 0;
    for (; x < 1 && x < width; ++x) SobelPoint(up, mid, down, x, width, ox + x, oy + x);
    for (; x + 5 <= width; x += 4) {
      const __m256d ul = _mm256_loadu_pd(up + x - 1);
      const __m256d uc = _mm256_loadu_pd(up + x);
      const __m256d ur = _mm256_loadu_pd(up + x + 1);
      const __m256d ml = _mm256_loadu_pd(mid + x - 1);
      const __m256d mr = _mm256_loadu_pd(mid + x + 1);
      const __m256d dl = _mm256_loadu_pd(down + x - 1);
      const __m256d dc = _mm256_loadu_pd(down + x);
      const __m256d dr = _mm256_loadu_pd(down + x + 1);
      const __m256d vx = _mm256_add_pd(
          _mm256_add_pd(_mm256_sub_pd(ur, ul), _mm256_mul_pd(two, _mm256_sub_pd(mr, ml))),
          _mm256_sub_pd(dr, dl));
      const __m256d vy = _mm256_add_pd(
          _mm256_add_pd(_mm256_sub_pd(dl, ul), _mm256_mul_pd(two, _mm256_sub_pd(dc, uc))),
          _mm256_sub_pd(dr, ur));
      _mm256_storeu_pd(ox + x, vx);
      _mm256_storeu_pd(oy + x, vy);
    }
    for (; x < width; ++x) SobelPoint(up, mid, down, x, width, ox + x, oy + x);
  }
}

double TraceCovariance(const double* c, const double* s, std::size_t n) {
  const double c0 = c[0];
  const double s0 = s[0];
  const __m256d vc0 = _mm256_set1_pd(c0);
  const __m256d vs0 = _mm256_set1_pd(s0);
  __m256d acc_c = _mm256_setzero_pd();
  __m256d acc_s = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc_c = _mm256_add_pd(acc_c, _mm256_sub_pd(_mm256_loadu_pd(c + i), vc0));
    acc_s = _mm256_add_pd(acc_s, _mm256_sub_pd(_mm256_loadu_pd(s + i), vs0));
  }
  double sum_c = HorizontalSum(acc_c);
  double sum_s = HorizontalSum(acc_s);
  for (; i < n; ++i) {
    sum_c += c[i] - c0;
    sum_s += s[i] - s0;
  }
  const double mean_c = sum_c / static_cast<double>(n);
  const double mean_s = sum_s / static_cast<double>(n);
  const __m256d vmc = _mm256_set1_pd(mean_c);
  const __m256d vms = _mm256_set1_pd(mean_s);
  __m256d acc = _mm256_setzero_pd();
  i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dc = _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(c + i), vc0), vmc);
    const __m256d ds = _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(s + i), vs0), vms);
    acc = _mm256_add_pd(acc, _mm256_add_pd(_mm256_mul_pd(dc, dc), _mm256_mul_pd(ds, ds)));
  }
  double ss = HorizontalSum(acc);
  for (; i < n; ++i) {
    const double dc = (c[i] - c0) - mean_c;
    const double ds = (s[i] - s0) - mean_s;
    ss += dc * dc + ds * ds;
  }
  return ss / static_cast<double>(n - 1);
}

std::size_t CountPlaneInliers(const double* x, const double* y, const double* z,
                              std::size_t n, double nx, double ny, double nz, double d,
                              double threshold) {
  const __m256d vnx = _mm256_set1_pd(nx);
  const __m256d vny = _mm256_set1_pd(ny);
  const __m256d vnz = _mm256_set1_pd(nz);
  const __m256d vd = _mm256_set1_pd(d);
  const __m256d vt = _mm256_set1_pd(threshold);
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_mul_pd(vnx, _mm256_loadu_pd(x + i));
    v = _mm256_add_pd(v, _mm256_mul_pd(vny, _mm256_loadu_pd(y + i)));
    v = _mm256_add_pd(v, _mm256_mul_pd(vnz, _mm256_loadu_pd(z + i)));
    v = _mm256_add_pd(v, vd);
    const __m256d mask = _mm256_cmp_pd(_mm256_andnot_pd(sign, v), vt, _CMP_LE_OQ);
    count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(mask)));
  }
  for (; i < n; ++i) {
    double v = nx * x[i];
    v = v + ny * y[i];
    v = v + nz * z[i];
    v = v + d;
    const double a = v < 0.0 ? -v : v;
    count += a <= threshold ? 1 : 0;
  }
  return count;
}

}  // namespace

const Kernels& Avx2Kernels() {
  static const Kernels kernels{ConvolveRows, ConvolveCols, Sobel, TraceCovariance,
                               CountPlaneInliers};
  return kernels;
}

}  // namespace clothgrasp::simd
