#include "clothgrasp/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "clothgrasp/errors.hpp"

namespace clothgrasp {
namespace {

void Blend(RgbImage& img, int x, int y, const std::uint8_t* color, double alpha) {
  std::uint8_t* px = img.pixel(x, y);
  for (int c = 0; c < 3; ++c) {
    px[c] = static_cast<std::uint8_t>(std::lround((1.0 - alpha) * px[c] + alpha * color[c]));
  }
}

void Dot(RgbImage& img, double x, double y, const std::uint8_t* color) {
  const int cx = static_cast<int>(std::lround(x));
  const int cy = static_cast<int>(std::lround(y));
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (img.contains(cx + dx, cy + dy)) img.set(cx + dx, cy + dy, color[0], color[1], color[2]);
    }
  }
}

void Segment(RgbImage& img, double x0, double y0, double x1, double y1, const std::uint8_t* color) {
  const double len = std::hypot(x1 - x0, y1 - y0);
  const int steps = std::max(1, static_cast<int>(std::ceil(len * 2.0)));
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    Dot(img, x0 + t * (x1 - x0), y0 + t * (y1 - y0), color);
  }
}

}  // namespace

RgbImage RenderOverlay(const RgbImage& base, const RegionMask& masks,
                       const std::optional<GraspConfig2D>& grasp, double alpha, int arrow_length,
                       const OverlayColors& colors) {
  if (masks.width() != base.width() || masks.height() != base.height()) {
    Throw(ErrorKind::kParameter, "overlay image and masks differ in size");
  }
  RgbImage out = base;
  for (int y = 0; y < base.height(); ++y) {
    for (int x = 0; x < base.width(); ++x) {
      const bool outer = masks.test(RegionClass::kOuterEdge, x, y);
      const bool inner = masks.test(RegionClass::kInnerEdge, x, y);
      if (outer && inner) Blend(out, x, y, colors.overlap, alpha);
      else if (outer) Blend(out, x, y, colors.outer, alpha);
      else if (inner) Blend(out, x, y, colors.inner, alpha);
      if (masks.test(RegionClass::kCorner, x, y)) Blend(out, x, y, colors.corner, alpha);
    }
  }
  if (grasp) {
    // The arrow ends at the grasp point and shows the approach direction.
    const double c = std::cos(grasp->angle_rad);
    const double s = std::sin(grasp->angle_rad);
    const double tx = grasp->point.x;
    const double ty = grasp->point.y;
    const double sx = tx - arrow_length * c;
    const double sy = ty - arrow_length * s;
    Segment(out, sx, sy, tx, ty, colors.arrow);
    const double head = 0.35 * arrow_length;
    for (double side : {-1.0, 1.0}) {
      const double a = grasp->angle_rad + std::numbers::pi + side * 0.5;
      Segment(out, tx, ty, tx + head * std::cos(a), ty + head * std::sin(a), colors.arrow);
    }
  }
  return out;
}

RgbImage DepthToRgb(const DepthImage& depth) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int y = 0; y < depth.height(); ++y) {
    for (int x = 0; x < depth.width(); ++x) {
      if (!depth.is_valid(x, y)) continue;
      lo = std::min(lo, depth(x, y));
      hi = std::max(hi, depth(x, y));
    }
  }
  RgbImage out(depth.width(), depth.height());
  const double span = hi > lo ? hi - lo : 1.0;
  for (int y = 0; y < depth.height(); ++y) {
    for (int x = 0; x < depth.width(); ++x) {
      if (!depth.is_valid(x, y)) continue;
      const auto v = static_cast<std::uint8_t>(std::lround(40.0 + 215.0 * (hi - depth(x, y)) / span));
      out.set(x, y, v, v, v);
    }
  }
  return out;
}

}  // namespace clothgrasp
