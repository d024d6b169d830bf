#pragma once

#include <filesystem>
#include <string>

#include "clothgrasp/geometry.hpp"
#include "clothgrasp/synthcloth.hpp"

namespace clothgrasp {

/// Writes <stem>.depth.png, <stem>.regions.png, <stem>.truth.png,
/// <stem>.rgb.png and <stem>.meta.json into dir.
///
/// truth.png channels: (cos + 1) / 2 and (sin + 1) / 2 scaled to 0..255,
/// both 0 where no direction is defined; third channel is top layer + 1
/// (0 = bare table).
void WriteSceneBundle(const SynthScene& scene, const std::filesystem::path& dir,
                      const std::string& stem);

/// Camera sidecar: fx, fy, cx, cy, width, height and a row-major 4x4
/// camera-to-world "extrinsic". Any scene meta file is accepted.
void SaveCamera(const CameraModel& cam, const std::filesystem::path& path);
CameraModel LoadCamera(const std::filesystem::path& path);

}  // namespace clothgrasp
