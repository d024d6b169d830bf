#include "clothgrasp/regions.hpp"

#include <cmath>
#include <string>

#include "clothgrasp/errors.hpp"
#include "clothgrasp/imaging.hpp"
#include "clothgrasp/png_io.hpp"

namespace clothgrasp {
namespace {

void CheckProbabilities(const ScalarField& f, const char* name) {
  for (double v : f.data()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      Throw(ErrorKind::kParameter, std::string(name) + " probability outside [0, 1]");
    }
  }
}

}  // namespace

RegionProbMap::RegionProbMap(int width, int height)
    : corner_(width, height, 0.0), outer_(width, height, 0.0), inner_(width, height, 0.0) {}

RegionProbMap::RegionProbMap(ScalarField corner, ScalarField outer, ScalarField inner)
    : corner_(std::move(corner)), outer_(std::move(outer)), inner_(std::move(inner)) {
  if (corner_.width() != outer_.width() || corner_.width() != inner_.width() ||
      corner_.height() != outer_.height() || corner_.height() != inner_.height()) {
    Throw(ErrorKind::kParameter, "probability planes differ in size");
  }
  CheckProbabilities(corner_, "corner");
  CheckProbabilities(outer_, "outer edge");
  CheckProbabilities(inner_, "inner edge");
}

const ScalarField& RegionProbMap::plane(RegionClass c) const noexcept {
  switch (c) {
    case RegionClass::kCorner: return corner_;
    case RegionClass::kOuterEdge: return outer_;
    case RegionClass::kInnerEdge: break;
  }
  return inner_;
}

void RegionProbMap::set(RegionClass c, int x, int y, double probability) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    Throw(ErrorKind::kParameter, "probability outside [0, 1]");
  }
  switch (c) {
    case RegionClass::kCorner: corner_(x, y) = probability; break;
    case RegionClass::kOuterEdge: outer_(x, y) = probability; break;
    case RegionClass::kInnerEdge: inner_(x, y) = probability; break;
  }
}

RegionMask::RegionMask(int width, int height)
    : corner_(width, height, 0), outer_(width, height, 0), inner_(width, height, 0) {}

RegionMask::RegionMask(BoolRaster corner, BoolRaster outer, BoolRaster inner)
    : corner_(std::move(corner)), outer_(std::move(outer)), inner_(std::move(inner)) {
  if (corner_.width() != outer_.width() || corner_.width() != inner_.width() ||
      corner_.height() != outer_.height() || corner_.height() != inner_.height()) {
    Throw(ErrorKind::kParameter, "mask planes differ in size");
  }
  Enumerate();
}

const BoolRaster& RegionMask::plane(RegionClass c) const noexcept {
  switch (c) {
    case RegionClass::kCorner: return corner_;
    case RegionClass::kOuterEdge: return outer_;
    case RegionClass::kInnerEdge: break;
  }
  return inner_;
}

const std::vector<Pixel>& RegionMask::points(RegionClass c) const noexcept {
  switch (c) {
    case RegionClass::kCorner: return corner_points_;
    case RegionClass::kOuterEdge: return outer_points_;
    case RegionClass::kInnerEdge: break;
  }
  return inner_points_;
}

void RegionMask::Enumerate() {
  corner_points_.clear();
  outer_points_.clear();
  inner_points_.clear();
  for (int y = 0; y < height(); ++y) {
    for (int x = 0; x < width(); ++x) {
      if (corner_(x, y)) corner_points_.push_back({x, y});
      if (outer_(x, y)) outer_points_.push_back({x, y});
      if (inner_(x, y)) inner_points_.push_back({x, y});
    }
  }
}

RegionMask ThresholdProbs(const RegionProbMap& probs, const Thresholds& tau) {
  for (double t : {tau.corner, tau.outer, tau.inner}) {
    if (!(t > 0.0 && t < 1.0)) {
      Throw(ErrorKind::kParameter, "threshold must lie in (0, 1), got " + std::to_string(t));
    }
  }
  const int w = probs.width();
  const int h = probs.height();
  BoolRaster corner(w, h, 0), outer(w, h, 0), inner(w, h, 0);
  const auto pc = probs.plane(RegionClass::kCorner).data();
  const auto po = probs.plane(RegionClass::kOuterEdge).data();
  const auto pi = probs.plane(RegionClass::kInnerEdge).data();
  for (std::size_t i = 0; i < pc.size(); ++i) {
    corner.data()[i] = pc[i] >= tau.corner;
    outer.data()[i] = po[i] >= tau.outer;
    inner.data()[i] = pi[i] >= tau.inner;
  }
  return RegionMask(std::move(corner), std::move(outer), std::move(inner));
}

void SaveProbMap(const RegionProbMap& probs, const std::filesystem::path& path) {
  RgbImage image(probs.width(), probs.height());
  const auto quantize = [](double p) {
    return static_cast<std::uint8_t>(std::lround(p * 255.0));
  };
  for (int y = 0; y < probs.height(); ++y) {
    for (int x = 0; x < probs.width(); ++x) {
      image.set(x, y, quantize(probs.get(RegionClass::kCorner, x, y)),
                quantize(probs.get(RegionClass::kOuterEdge, x, y)),
                quantize(probs.get(RegionClass::kInnerEdge, x, y)));
    }
  }
  png::WriteRgb8(path, image);
}

RegionProbMap LoadProbMap(const std::filesystem::path& path) {
  const png::Image image = png::Read(path);
  if (image.bit_depth != 8 || image.channels != 3) {
    Throw(ErrorKind::kFormat, path.string() + ": regions file must be an 8-bit 3-channel PNG (got " +
                                  std::to_string(image.channels) + " channels, " +
                                  std::to_string(image.bit_depth) + " bits)");
  }
  RegionProbMap probs(image.width, image.height);
  std::size_t i = 0;
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x, i += 3) {
      probs.set(RegionClass::kCorner, x, y, image.samples[i] / 255.0);
      probs.set(RegionClass::kOuterEdge, x, y, image.samples[i + 1] / 255.0);
      probs.set(RegionClass::kInnerEdge, x, y, image.samples[i + 2] / 255.0);
    }
  }
  return probs;
}

RegionProbMap ToProbMap(const RegionMask& mask) {
  RegionProbMap probs(mask.width(), mask.height());
  for (RegionClass c : {RegionClass::kCorner, RegionClass::kOuterEdge, RegionClass::kInnerEdge}) {
    for (Pixel p : mask.points(c)) probs.set(c, p.x, p.y, 1.0);
  }
  return probs;
}

}  // namespace clothgrasp
