#include "clothgrasp/imaging.hpp"

#include <cmath>
#include <deque>
#include <string>

#include "clothgrasp/errors.hpp"
#include "clothgrasp/simd.hpp"

namespace clothgrasp {

DepthImage::DepthImage(int width, int height, double fill) : raster_(width, height, fill) {
  if (width < 0 || height < 0) Throw(ErrorKind::kParameter, "negative depth image size");
  if (!std::isfinite(fill) || fill < 0.0) Throw(ErrorKind::kParameter, "invalid depth fill value");
}

DepthImage::DepthImage(int width, int height, std::vector<double> meters) {
  if (width < 0 || height < 0 ||
      meters.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    Throw(ErrorKind::kParameter, "depth data length does not match width x height");
  }
  for (double v : meters) {
    if (!std::isfinite(v) || v < 0.0) Throw(ErrorKind::kParameter, "depth values must be finite and >= 0");
  }
  raster_ = Raster<double>(width, height, std::move(meters));
}

void DepthImage::set(int x, int y, double meters) {
  if (!std::isfinite(meters) || meters < 0.0) {
    Throw(ErrorKind::kParameter, "depth values must be finite and >= 0");
  }
  raster_(x, y) = meters;
}

std::size_t DepthImage::valid_count() const noexcept {
  std::size_t n = 0;
  for (double v : raster_.data()) n += v > 0.0 ? 1 : 0;
  return n;
}

RgbImage::RgbImage(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) Throw(ErrorKind::kParameter, "negative image size");
  data_.resize(3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = r;
    data_[i + 1] = g;
    data_[i + 2] = b;
  }
}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 0 || height < 0 ||
      data_.size() != 3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    Throw(ErrorKind::kParameter, "rgb data length does not match 3 x width x height");
  }
}

void RgbImage::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  std::uint8_t* p = pixel(x, y);
  p[0] = r;
  p[1] = g;
  p[2] = b;
}

ScalarField Grayscale(const RgbImage& image) {
  ScalarField out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const std::uint8_t* p = image.pixel(x, y);
      const double v = (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0;
      out(x, y) = v > 1.0 ? 1.0 : v;
    }
  }
  return out;
}

std::vector<double> GaussianKernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    Throw(ErrorKind::kParameter, "gaussian sigma must be > 0, got " + std::to_string(sigma));
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * static_cast<std::size_t>(radius) + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
    taps[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

ScalarField GaussianBlur(const ScalarField& field, double sigma) {
  const std::vector<double> taps = GaussianKernel(sigma);
  const int radius = static_cast<int>(taps.size() / 2);
  if (field.empty()) return field;
  const auto& k = simd::Active();
  ScalarField tmp(field.width(), field.height());
  ScalarField out(field.width(), field.height());
  k.convolve_rows(field.data().data(), tmp.data().data(), field.width(), field.height(),
                  taps.data(), radius);
  k.convolve_cols(tmp.data().data(), out.data().data(), field.width(), field.height(),
                  taps.data(), radius);
  return out;
}

Gradients SobelGradients(const ScalarField& field) {
  if (field.width() < 3 || field.height() < 3) {
    Throw(ErrorKind::kParameter, "sobel needs an image of at least 3x3");
  }
  Gradients g{ScalarField(field.width(), field.height()), ScalarField(field.width(), field.height())};
  simd::Active().sobel(field.data().data(), g.gx.data().data(), g.gy.data().data(), field.width(),
                       field.height());
  return g;
}

ScalarField InpaintedDepth(const DepthImage& depth) {
  const int w = depth.width();
  const int h = depth.height();
  ScalarField out(w, h, 0.0);
  Raster<std::uint8_t> filled(w, h, 0);
  std::deque<Pixel> frontier;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (depth.is_valid(x, y)) {
        out(x, y) = depth(x, y);
        filled(x, y) = 1;
        frontier.push_back({x, y});
      }
    }
  }
  constexpr int kDx[4] = {0, -1, 1, 0};
  constexpr int kDy[4] = {-1, 0, 0, 1};
  while (!frontier.empty()) {
    const Pixel p = frontier.front();
    frontier.pop_front();
    for (int i = 0; i < 4; ++i) {
      const int nx = p.x + kDx[i];
      const int ny = p.y + kDy[i];
      if (!out.contains(nx, ny) || filled(nx, ny)) continue;
      filled(nx, ny) = 1;
      out(nx, ny) = out(p.x, p.y);
      frontier.push_back({nx, ny});
    }
  }
  return out;
}

}  // namespace clothgrasp
