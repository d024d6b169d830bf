#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "clothgrasp/cli.hpp"
#include "clothgrasp/png_io.hpp"
#include "clothgrasp/regions.hpp"
#include "clothgrasp/synthcloth.hpp"
#include "json.hpp"
#include "scenes.hpp"

namespace clothgrasp {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun Cli(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"clothgrasp"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::path(CLOTHGRASP_TEST_TMP) / ("cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

TEST(CliTest, GenIsByteIdenticalAcrossRuns) {
  const fs::path a = TempDir("gen_a"), b = TempDir("gen_b");
  ASSERT_EQ(Cli({"gen", "--scenes", "2", "--seed", "7", "--out", a.string()}).code, 0);
  ASSERT_EQ(Cli({"gen", "--scenes", "2", "--seed", "7", "--out", b.string()}).code, 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    EXPECT_EQ(Slurp(e.path()), Slurp(b / e.path().filename())) << e.path();
    ++files;
  }
  EXPECT_EQ(files, 10);
  EXPECT_TRUE(fs::exists(a / "scene_1.depth.png"));
  EXPECT_TRUE(fs::exists(a / "scene_0.meta.json"));
}

TEST(CliTest, GenZeroScenesWritesNothing) {
  const fs::path d = TempDir("gen_zero");
  EXPECT_EQ(Cli({"gen", "--scenes", "0", "--out", d.string()}).code, 0);
  EXPECT_TRUE(fs::is_empty(d));
}

TEST(CliTest, GenWithoutOutIsUsageError) {
  EXPECT_EQ(Cli({"gen", "--scenes", "1"}).code, kExitUsage);
  EXPECT_EQ(Cli({"gen", "--out", "x", "--folds", "3..1"}).code, kExitUsage);
  EXPECT_EQ(Cli({}).code, kExitUsage);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitUsage);
}

TEST(CliTest, GenIntoUnwritablePathIsIoError) {
  const fs::path d = TempDir("gen_blocked");
  std::ofstream(d / "file") << "x";
  EXPECT_EQ(Cli({"gen", "--scenes", "1", "--out", (d / "file" / "sub").string()}).code, kExitIo);
}

TEST(CliTest, SelectOnFlatSceneLandsOnOuterBand) {
  const fs::path d = TempDir("select_flat");
  const SynthScene s = testing_support::CenteredFlatScene();
  png::WriteDepth(d / "d.png", s.depth);
  SaveProbMap(ToProbMap(s.truth.labels), d / "r.png");
  const CliRun r = Cli({"select", "--depth", (d / "d.png").string(), "--regions", (d / "r.png").string(),
                     "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  GraspConfig2D g;
  g.point = {j["pixel"][0].get<int>(), j["pixel"][1].get<int>()};
  g.angle_rad = j["angle_rad"].get<double>();
  EXPECT_TRUE(Evaluate(g, s).success);

  const CliRun again = Cli({"select", "--depth", (d / "d.png").string(), "--regions",
                         (d / "r.png").string(), "--json"});
  EXPECT_EQ(again.out, r.out);

  ASSERT_EQ(Cli({"select", "--depth", (d / "d.png").string(), "--regions", (d / "r.png").string(),
                 "--out", (d / "g1.json").string()}).code, 0);
  ASSERT_EQ(Cli({"select", "--depth", (d / "d.png").string(), "--regions", (d / "r.png").string(),
                 "--out", (d / "g2.json").string()}).code, 0);
  EXPECT_EQ(Slurp(d / "g1.json"), Slurp(d / "g2.json"));
}

TEST(CliTest, SelectWithCameraAddsPoses) {
  const fs::path d = TempDir("select_cam");
  ASSERT_EQ(Cli({"gen", "--scenes", "1", "--seed", "3", "--out", d.string()}).code, 0);
  const CliRun r = Cli({"select", "--depth", (d / "scene_0.depth.png").string(), "--regions",
                     (d / "scene_0.regions.png").string(), "--camera",
                     (d / "scene_0.meta.json").string(), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.contains("pregrasp"));
}

TEST(CliTest, SelectOnEmptyRegionsExitsThree) {
  const fs::path d = TempDir("select_empty");
  png::WriteDepth(d / "d.png", DepthImage(32, 24, 0.7));
  SaveProbMap(RegionProbMap(32, 24), d / "r.png");
  const CliRun r = Cli({"select", "--depth", (d / "d.png").string(), "--regions", (d / "r.png").string(),
                     "--json"});
  EXPECT_EQ(r.code, kExitNoCandidates);
  EXPECT_NE(r.err.find("reason: NoCandidates"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(r.out)["error"], "NoCandidates");
}

TEST(CliTest, SelectSizeMismatchIsFormatError) {
  const fs::path d = TempDir("select_mismatch");
  png::WriteDepth(d / "d.png", DepthImage(32, 24, 0.7));
  SaveProbMap(RegionProbMap(30, 24), d / "r.png");
  EXPECT_EQ(Cli({"select", "--depth", (d / "d.png").string(), "--regions", (d / "r.png").string()}).code,
            kExitIo);
}

TEST(CliTest, MissingInputIsIoError) {
  const fs::path d = TempDir("select_missing");
  SaveProbMap(RegionProbMap(8, 8), d / "r.png");
  const CliRun r = Cli({"select", "--depth", (d / "nope.png").string(), "--regions", (d / "r.png").string()});
  EXPECT_EQ(r.code, kExitIo);
  EXPECT_NE(r.err.find("reason: Io"), std::string::npos) << r.err;
}

TEST(CliTest, CorruptPngIsFormatError) {
  const fs::path d = TempDir("select_corrupt");
  std::ofstream(d / "d.png") << "not a png";
  SaveProbMap(RegionProbMap(8, 8), d / "r.png");
  EXPECT_EQ(Cli({"select", "--depth", (d / "d.png").string(), "--regions", (d / "r.png").string()}).code,
            kExitIo);
}

TEST(CliTest, UnknownMethodsAreUsageErrors) {
  EXPECT_EQ(Cli({"bench", "--methods", "ours,magic", "--scenes", "1"}).code, kExitUsage);
  const fs::path d = TempDir("detect_unknown");
  png::WriteDepth(d / "d.png", DepthImage(32, 24, 0.7));
  EXPECT_EQ(Cli({"detect", "--method", "sift", "--depth", (d / "d.png").string()}).code, kExitUsage);
}

TEST(CliTest, DetectHarrisDepthFindsSquareCorner) {
  const fs::path d = TempDir("detect_square");
  DepthImage depth(64, 64, 0.7);
  for (int y = 20; y < 44; ++y) {
    for (int x = 20; x < 44; ++x) depth.set(x, y, 0.65);
  }
  png::WriteDepth(d / "d.png", depth);
  const CliRun r = Cli({"detect", "--method", "harris-depth", "--depth", (d / "d.png").string(), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  const int x = j["pixel"][0], y = j["pixel"][1];
  const bool near_x = std::abs(x - 20) <= 2 || std::abs(x - 43) <= 2;
  const bool near_y = std::abs(y - 20) <= 2 || std::abs(y - 43) <= 2;
  EXPECT_TRUE(near_x && near_y) << x << "," << y;
}

TEST(CliTest, BenchPrintsCsvRows) {
  const CliRun r = Cli({"bench", "--methods", "ours,nodP", "--scenes", "2", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("method,scenes,successes,rate,misdetection,direction_error,no_candidates\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
  EXPECT_EQ(Cli({"bench", "--methods", "ours,nodP", "--scenes", "2", "--seed", "1"}).out, r.out);
}

TEST(CliTest, OverlayOnEmptyMasksIsPassthrough) {
  const fs::path d = TempDir("overlay_empty");
  RgbImage img(20, 16);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 20; ++x) {
      img.set(x, y, static_cast<std::uint8_t>(10 * x), static_cast<std::uint8_t>(12 * y), 77);
    }
  }
  png::WriteRgb8(d / "in.png", img);
  SaveProbMap(RegionProbMap(20, 16), d / "r.png");
  const CliRun r = Cli({"overlay", "--regions", (d / "r.png").string(), "--image", (d / "in.png").string(),
                     "--out", (d / "o.png").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(png::ReadRgb(d / "o.png"), img);
}

TEST(CliTest, OverlayDrawsFlatSceneColours) {
  const fs::path d = TempDir("overlay_flat");
  ASSERT_EQ(Cli({"gen", "--scenes", "1", "--seed", "2", "--folds", "0..0", "--out", d.string()}).code, 0);
  const CliRun r = Cli({"overlay", "--regions", (d / "scene_0.regions.png").string(), "--image",
                     (d / "scene_0.rgb.png").string(), "--out", (d / "o.png").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const RgbImage before = png::ReadRgb(d / "scene_0.rgb.png");
  const RgbImage after = png::ReadRgb(d / "o.png");
  EXPECT_NE(before, after);
  bool magenta = false;
  for (int y = 0; y < after.height() && !magenta; ++y) {
    for (int x = 0; x < after.width(); ++x) {
      const std::uint8_t* p = after.pixel(x, y);
      if (p[0] == 255 && p[1] == 0 && p[2] == 255) magenta = true;
    }
  }
  EXPECT_TRUE(magenta);
}

TEST(CliTest, HelpListsDefaults) {
  const CliRun sel = Cli({"select", "--help"});
  EXPECT_EQ(sel.code, 0);
  for (const char* flag : {"--k", "--mode", "--tau-outer", "--tilt", "--pre-offset"}) {
    EXPECT_NE(sel.out.find(flag), std::string::npos) << flag;
  }
  EXPECT_NE(sel.out.find("100"), std::string::npos);
  EXPECT_NE(sel.out.find("edge"), std::string::npos);
  const CliRun bench = Cli({"bench", "--help"});
  EXPECT_NE(bench.out.find("42"), std::string::npos);
  EXPECT_NE(bench.out.find("200"), std::string::npos);
}

TEST(CliTest, ExitCodeTable) {
  EXPECT_EQ(ExitCodeFor(ErrorKind::kParameter), 2);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kNoCandidates), 3);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kInvalidDepth), 3);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kFormat), 4);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kIo), 4);
}

}  // namespace
}  // namespace clothgrasp
