#pragma once

#include <optional>

#include "clothgrasp/graspsel.hpp"
#include "clothgrasp/imaging.hpp"
#include "clothgrasp/regions.hpp"

namespace clothgrasp {

struct OverlayColors {
  std::uint8_t outer[3] = {255, 255, 0};
  std::uint8_t inner[3] = {0, 200, 0};
  std::uint8_t corner[3] = {0, 90, 255};
  std::uint8_t overlap[3] = {255, 150, 0};  // outer and inner together
  std::uint8_t arrow[3] = {255, 0, 255};
};

/// Blends region colours over `base` (corners drawn last) and, if given,
/// draws the grasp as an arrow. Pixels with no label are left untouched.
RgbImage RenderOverlay(const RgbImage& base, const RegionMask& masks,
                       const std::optional<GraspConfig2D>& grasp, double alpha = 0.6,
                       int arrow_length = 30, const OverlayColors& colors = {});

/// Grey visualisation of a depth image, near = bright. Invalid pixels are black.
RgbImage DepthToRgb(const DepthImage& depth);

}  // namespace clothgrasp
