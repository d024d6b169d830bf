#pragma once

#include <cstdint>
#include <vector>

#include "clothgrasp/raster.hpp"

namespace clothgrasp {

/// Depth raster in meters. Invalid (dropout) pixels are exactly 0.0.
class DepthImage {
 public:
  DepthImage() = default;
  DepthImage(int width, int height, double fill = 0.0);
  /// Throws kParameter if the data length or any value breaks the invariants.
  DepthImage(int width, int height, std::vector<double> meters);

  int width() const noexcept { return raster_.width(); }
  int height() const noexcept { return raster_.height(); }
  bool is_valid(int x, int y) const noexcept { return raster_(x, y) > 0.0; }
  double operator()(int x, int y) const noexcept { return raster_(x, y); }
  double operator[](Pixel p) const noexcept { return raster_[p]; }
  /// Values must be finite and non-negative; negative input throws.
  void set(int x, int y, double meters);

  const Raster<double>& raster() const noexcept { return raster_; }
  std::size_t valid_count() const noexcept;

  friend bool operator==(const DepthImage&, const DepthImage&) = default;

 private:
  Raster<double> raster_;
};

/// Interleaved 8-bit RGB.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, std::uint8_t r = 0, std::uint8_t g = 0, std::uint8_t b = 0);
  RgbImage(int width, int height, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  std::uint8_t* pixel(int x, int y) noexcept { return &data_[offset(x, y)]; }
  const std::uint8_t* pixel(int x, int y) const noexcept { return &data_[offset(x, y)]; }
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);

  const std::vector<std::uint8_t>& data() const noexcept { return data_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::size_t offset(int x, int y) const noexcept {
    return 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(x));
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

struct Gradients {
  ScalarField gx;
  ScalarField gy;
};

/// ITU-R 601 luminance scaled to [0, 1].
ScalarField Grayscale(const RgbImage& image);

/// Normalized discrete Gaussian with radius ceil(3 sigma).
std::vector<double> GaussianKernel(double sigma);

/// Separable Gaussian blur with clamp-to-edge borders. sigma must be > 0.
ScalarField GaussianBlur(const ScalarField& field, double sigma);

/// Unnormalized 3x3 Sobel (a unit ramp yields 8). Requires width, height >= 3.
Gradients SobelGradients(const ScalarField& field);

/// Depth as a scalar field with dropouts replaced by their nearest valid
/// neighbour (breadth-first, 4-connected). An all-invalid image maps to zeros.
ScalarField InpaintedDepth(const DepthImage& depth);

}  // namespace clothgrasp
