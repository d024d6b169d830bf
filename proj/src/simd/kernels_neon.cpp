#include "kernels_internal.hpp"

#include <arm_neon.h>

namespace clothgrasp::simd {
namespace {

inline int Clamp(int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); }

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
    for (; x + 2 + radius <= width; x += 2) {
      float64x2_t acc = vdupq_n_f64(0.0);
      for (int t = -radius; t <= radius; ++t) {
        acc = vfmaq_n_f64(acc, vld1q_f64(row + x + t), taps[t + radius]);
      }
      vst1q_f64(out + x, acc);
    }
    for (; x < width; ++x) out[x] = ConvolvePoint(row, x, width, taps, radius);
  }
}

void ConvolveCols(const double* src, double* dst, int width, int height,
                  const double* taps, int radius) {
  for (int y = 0; y < height; ++y) {
    double* out = dst + static_cast<long>(y) * width;
    int x = 0;
    for (; x + 2 <= width; x += 2) {
      float64x2_t acc = vdupq_n_f64(0.0);
      for (int t = -radius; t <= radius; ++t) {
        const double* row = src + static_cast<long>(Clamp(y + t, height - 1)) * width;
        acc = vfmaq_n_f64(acc, vld1q_f64(row + x), taps[t + radius]);
      }
      vst1q_f64(out + x, acc);
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
  for (int y = 0; y < height; ++y) {
    const double* up = src + static_cast<long>(Clamp(y - 1, height - 1)) * width;
    const double* mid = src + static_cast<long>(y) * width;
    const double* down = src + static_cast<long>(Clamp(y + 1, height - 1)) * width;
    double* ox = gx + static_cast<long>(y) * width;
    double* oy = gy + static_cast<long>(y) * width;
    int x = 0;
    for (; x < 1 && x < width; ++x) SobelPoint(up, mid, down, x, width, ox + x, oy + x);
    for (; x + 3 <= width; x += 2) {
      const float64x2_t ul = vld1q_f64(up + x - 1);
      const float64x2_t uc = vld1q_f64(up + x);
      const float64x2_t ur = vld1q_f64(up + x + 1);
      const float64x2_t ml = vld1q_f64(mid + x - 1);
      const float64x2_t mr = vld1q_f64(mid + x + 1);
      const float64x2_t dl = vld1q_f64(down + x - 1);
      const float64x2_t dc = vld1q_f64(down + x);
      const float64x2_t dr = vld1q_f64(down + x + 1);
      const float64x2_t vx = vaddq_f64(
          vaddq_f64(vsubq_f64(ur, ul), vmulq_n_f64(vsubq_f64(mr, ml), 2.0)), vsubq_f64(dr, dl));
      const float64x2_t vy = vaddq_f64(
          vaddq_f64(vsubq_f64(dl, ul), vmulq_n_f64(vsubq_f64(dc, uc), 2.0)), vsubq_f64(dr, ur));
      vst1q_f64(ox + x, vx);
      vst1q_f64(oy + x, vy);
    }
    for (; x < width; ++x) SobelPoint(up, mid, down, x, width, ox + x, oy + x);
  }
}

double TraceCovariance(const double* c, const double* s, std::size_t n) {
  const double c0 = c[0];
  const double s0 = s[0];
  const float64x2_t vc0 = vdupq_n_f64(c0);
  const float64x2_t vs0 = vdupq_n_f64(s0);
  float64x2_t acc_c = vdupq_n_f64(0.0);
  float64x2_t acc_s = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc_c = vaddq_f64(acc_c, vsubq_f64(vld1q_f64(c + i), vc0));
    acc_s = vaddq_f64(acc_s, vsubq_f64(vld1q_f64(s + i), vs0));
  }
  double sum_c = vaddvq_f64(acc_c);
  double sum_s = vaddvq_f64(acc_s);
  for (; i < n; ++i) {
    sum_c += c[i] - c0;
    sum_s += s[i] - s0;
  }
  const double mean_c = sum_c / static_cast<double>(n);
  const double mean_s = sum_s / static_cast<double>(n);
  const float64x2_t vmc = vdupq_n_f64(mean_c);
  const float64x2_t vms = vdupq_n_f64(mean_s);
  float64x2_t acc = vdupq_n_f64(0.0);
  i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dc = vsubq_f64(vsubq_f64(vld1q_f64(c + i), vc0), vmc);
    const float64x2_t ds = vsubq_f64(vsubq_f64(vld1q_f64(s + i), vs0), vms);
    acc = vaddq_f64(acc, vaddq_f64(vmulq_f64(dc, dc), vmulq_f64(ds, ds)));
  }
  double ss = vaddvq_f64(acc);
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
  const float64x2_t vt = vdupq_n_f64(threshold);
  const float64x2_t vd = vdupq_n_f64(d);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vmulq_n_f64(vld1q_f64(x + i), nx);
    v = vaddq_f64(v, vmulq_n_f64(vld1q_f64(y + i), ny));
    v = vaddq_f64(v, vmulq_n_f64(vld1q_f64(z + i), nz));
    v = vaddq_f64(v, vd);
    const uint64x2_t le = vcleq_f64(vabsq_f64(v), vt);
    count += static_cast<std::size_t>((vgetq_lane_u64(le, 0) & 1u) + (vgetq_lane_u64(le, 1) & 1u));
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

const Kernels& NeonKernels() {
  static const Kernels kernels{ConvolveRows, ConvolveCols, Sobel, TraceCovariance,
                               CountPlaneInliers};
  return kernels;
}

}  // namespace clothgrasp::simd
