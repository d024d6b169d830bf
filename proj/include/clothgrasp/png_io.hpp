#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "clothgrasp/imaging.hpp"

namespace clothgrasp::png {

/// Decoded PNG: samples are row-major, interleaved, one entry per channel.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;   // 1 gray, 2 gray+alpha, 3 rgb, 4 rgba
  int bit_depth = 0;  // 8 or 16 after expansion
  std::vector<std::uint16_t> samples;
};

/// Throws kIo when the file cannot be opened and kFormat (with the byte
/// offset reached) when it is not a decodable PNG.
Image Read(const std::filesystem::path& path);

void WriteGray16(const std::filesystem::path& path, int width, int height,
                 const std::vector<std::uint16_t>& samples);
void WriteRgb8(const std::filesystem::path& path, const RgbImage& image);

/// 16-bit millimetre depth; 0 stays invalid. Values are rounded and
/// saturate at 65535 mm.
void WriteDepth(const std::filesystem::path& path, const DepthImage& depth);
DepthImage ReadDepth(const std::filesystem::path& path);

/// Accepts 8-bit gray, gray+alpha, RGB or RGBA (alpha ignored).
RgbImage ReadRgb(const std::filesystem::path& path);

}  // namespace clothgrasp::png
