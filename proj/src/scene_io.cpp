#include "clothgrasp/scene_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "clothgrasp/errors.hpp"
#include "clothgrasp/png_io.hpp"
#include "clothgrasp/regions.hpp"

namespace clothgrasp {
namespace {

using nlohmann::json;

json CameraJson(const CameraModel& cam) {
  json extrinsic = json::array();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      double v = 0.0;
      if (r < 3 && c < 3) v = cam.rotation(r, c);
      else if (r < 3) v = cam.translation(r);
      else v = (c == 3) ? 1.0 : 0.0;
      extrinsic.push_back(v);
    }
  }
  return {{"fx", cam.fx},       {"fy", cam.fy},         {"cx", cam.cx},
          {"cy", cam.cy},       {"width", cam.width},   {"height", cam.height},
          {"extrinsic", extrinsic}};
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Throw(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) Throw(ErrorKind::kIo, "failed writing " + path.string());
}

std::uint8_t UnitToByte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp((v + 1.0) * 0.5, 0.0, 1.0) * 255.0));
}

}  // namespace

void SaveCamera(const CameraModel& cam, const std::filesystem::path& path) {
  WriteText(path, CameraJson(cam).dump(2) + "\n");
}

CameraModel LoadCamera(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Throw(ErrorKind::kIo, "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    Throw(ErrorKind::kFormat, path.string() + ": invalid JSON at byte offset " +
                                  std::to_string(e.byte));
  }
  CameraModel cam;
  try {
    cam.fx = j.at("fx").get<double>();
    cam.fy = j.at("fy").get<double>();
    cam.cx = j.at("cx").get<double>();
    cam.cy = j.at("cy").get<double>();
    cam.width = j.value("width", cam.width);
    cam.height = j.value("height", cam.height);
    const auto& e = j.at("extrinsic");
    if (!e.is_array() || e.size() != 16) {
      Throw(ErrorKind::kFormat, path.string() + ": extrinsic must hold 16 numbers");
    }
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) cam.rotation(r, c) = e[static_cast<std::size_t>(4 * r + c)].get<double>();
      cam.translation(r) = e[static_cast<std::size_t>(4 * r + 3)].get<double>();
    }
  } catch (const json::exception& e) {
    Throw(ErrorKind::kFormat, path.string() + ": " + e.what());
  }
  try {
    cam.Validate();
  } catch (const Error& e) {
    Throw(ErrorKind::kFormat, path.string() + ": " + e.what());
  }
  return cam;
}

void WriteSceneBundle(const SynthScene& scene, const std::filesystem::path& dir,
                      const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Throw(ErrorKind::kIo, "cannot create " + dir.string() + ": " + ec.message());
  const auto file = [&](const char* suffix) { return dir / (stem + suffix); };

  png::WriteDepth(file(".depth.png"), scene.depth);
  SaveProbMap(ToProbMap(scene.truth.labels), file(".regions.png"));
  png::WriteRgb8(file(".rgb.png"), scene.rgb);

  const GroundTruth& gt = scene.truth;
  const int w = scene.depth.width();
  const int h = scene.depth.height();
  RgbImage truth(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool has_dir = gt.dir_defined(x, y) != 0;
      truth.set(x, y, has_dir ? UnitToByte(gt.dir_cos(x, y)) : 0,
                has_dir ? UnitToByte(gt.dir_sin(x, y)) : 0,
                static_cast<std::uint8_t>(std::clamp(gt.top_layer(x, y) + 1, 0, 255)));
    }
  }
  png::WriteRgb8(file(".truth.png"), truth);

  json meta = CameraJson(scene.cam);
  meta["seed"] = scene.seed;
  meta["noise_sigma"] = scene.noise_sigma;
  meta["cloth_side"] = scene.cloth.side;
  meta["thickness"] = scene.cloth.thickness;
  json folds = json::array();
  for (const FoldLine& f : scene.cloth.folds) {
    folds.push_back({{"point", {f.point.x(), f.point.y()}},
                     {"direction", {f.direction.x(), f.direction.y()}}});
  }
  meta["folds"] = folds;
  meta["placement"] = {{"angle", scene.cloth.placement.angle},
                       {"offset", {scene.cloth.placement.offset.x(),
                                   scene.cloth.placement.offset.y()}}};
  WriteText(file(".meta.json"), meta.dump(2) + "\n");
}

}  // namespace clothgrasp
