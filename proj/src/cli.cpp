#include "clothgrasp/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "clothgrasp/benchmark.hpp"
#include "clothgrasp/detectors.hpp"
#include "clothgrasp/geometry.hpp"
#include "clothgrasp/graspsel.hpp"
#include "clothgrasp/overlay.hpp"
#include "clothgrasp/png_io.hpp"
#include "clothgrasp/regions.hpp"
#include "clothgrasp/rng.hpp"
#include "clothgrasp/scene_io.hpp"
#include "clothgrasp/synthcloth.hpp"

namespace clothgrasp {
namespace {

using nlohmann::json;

struct GenArgs {
  int scenes = 1;
  std::uint64_t seed = 0;
  std::string folds = "1..3";
  std::string out;
  double noise = 0.002;
};

struct PlanArgs {
  std::string camera;
  double tilt = 45.0;
  double z_offset = 0.015;
  double pre_offset = 0.06;
  double post_offset = 0.03;
};

struct SelectArgs {
  std::string depth;
  std::string regions;
  std::string mode = "edge";
  std::size_t k = kDefaultNeighbors;
  Thresholds tau;
  std::string out;
  bool json = false;
  bool time = false;
  PlanArgs plan;
};

struct DetectArgs {
  std::string method;
  std::string depth;
  std::string rgb;
  std::uint64_t seed = 0;
  BaselineParams params;
  std::string out;
  bool json = false;
  PlanArgs plan;
};

struct BenchArgs {
  std::string methods = "ours,nodU,nodP";
  int scenes = 200;
  std::uint64_t seed = 42;
  std::string mode = "edge";
  double tol = kDefaultDirectionTolDeg;
  std::size_t k = kDefaultNeighbors;
  std::string folds = "1..3";
  double noise = 0.002;
  unsigned threads = 0;
  BaselineParams params;
  std::string out;
};

struct OverlayArgs {
  std::string regions;
  std::string image;
  std::string depth;
  std::string out;
  std::string mode = "edge";
  std::size_t k = kDefaultNeighbors;
  Thresholds tau;
};

GraspMode ParseMode(const std::string& s) {
  if (s == "edge") return GraspMode::kEdge;
  if (s == "corner") return GraspMode::kCorner;
  Throw(ErrorKind::kParameter, "mode must be 'edge' or 'corner', got '" + s + "'");
}

std::pair<int, int> ParseFoldRange(const std::string& s) {
  const auto dots = s.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const int n = std::stoi(s, &used);
      if (used == s.size() && n >= 0) return {n, n};
    } else {
      const std::string a = s.substr(0, dots);
      const std::string b = s.substr(dots + 2);
      std::size_t used_b = 0;
      const int lo = std::stoi(a, &used);
      const int hi = std::stoi(b, &used_b);
      if (used == a.size() && used_b == b.size() && lo >= 0 && hi >= lo) return {lo, hi};
    }
  } catch (const std::exception&) {
  }
  Throw(ErrorKind::kParameter, "--folds expects MIN..MAX with 0 <= MIN <= MAX, got '" + s + "'");
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

json PoseJson(const Pose6D& pose) {
  const auto q = pose.Quaternion();
  return {{"position", {pose.position.x(), pose.position.y(), pose.position.z()}},
          {"quaternion", {q[0], q[1], q[2], q[3]}}};
}

json GraspJson(const GraspConfig2D& g) {
  json j = {{"pixel", {g.point.x, g.point.y}},
            {"angle_rad", g.angle_rad},
            {"uncertainty", nullptr},
            {"mode", std::string(ToString(g.mode))},
            {"method", g.method}};
  if (g.uncertainty) j["uncertainty"] = *g.uncertainty;
  return j;
}

void AddPlan(json& j, const GraspConfig2D& g, const DepthImage& depth, const PlanArgs& args) {
  if (args.camera.empty()) return;
  const CameraModel cam = LoadCamera(args.camera);
  if (cam.width != depth.width() || cam.height != depth.height()) {
    Throw(ErrorKind::kFormat, "camera image size does not match the depth image");
  }
  ExecutionParams params;
  params.tilt_deg = args.tilt;
  params.z_offset = args.z_offset;
  params.pre_offset = args.pre_offset;
  params.post_offset = args.post_offset;
  const GraspPlan plan = PlanSlidingGrasp(g.point, g.angle_rad, depth, cam, params);
  j["point3d"] = {plan.point.x(), plan.point.y(), plan.point.z()};
  j["world_yaw"] = plan.world_yaw;
  j["pregrasp_topdown"] = PoseJson(plan.topdown);
  j["pregrasp"] = PoseJson(plan.pregrasp);
  j["preslide"] = PoseJson(plan.slide.pre_slide);
  j["postslide"] = PoseJson(plan.slide.post_slide);
}

void Emit(const json& record, const std::string& out_path, bool to_stdout, std::ostream& out) {
  const std::string text = record.dump(2) + "\n";
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) Throw(ErrorKind::kIo, "cannot open " + out_path + " for writing");
    f << text;
    if (!f) Throw(ErrorKind::kIo, "failed writing " + out_path);
  }
  if (to_stdout) out << text;
}

void AddPlanFlags(CLI::App* cmd, PlanArgs& a) {
  cmd->add_option("--camera", a.camera, "Camera JSON (a scene meta file works); enables 3D poses");
  cmd->add_option("--tilt", a.tilt, "Tilt of the sliding approach in degrees")
      ->check(CLI::Range(0.0, 90.0));
  cmd->add_option("--z-offset", a.z_offset, "Fingertip height offset (m)");
  cmd->add_option("--pre-offset", a.pre_offset, "Pre-slide distance behind the grasp (m)");
  cmd->add_option("--post-offset", a.post_offset, "Post-slide distance past the grasp (m)");
}

void AddTauFlags(CLI::App* cmd, Thresholds& tau) {
  cmd->add_option("--tau-corner", tau.corner, "Corner probability threshold");
  cmd->add_option("--tau-outer", tau.outer, "Outer-edge probability threshold");
  cmd->add_option("--tau-inner", tau.inner, "Inner-edge probability threshold");
}

void AddBaselineFlags(CLI::App* cmd, BaselineParams& p) {
  cmd->add_option("--canny-sigma", p.canny_sigma, "Canny blur sigma (px)");
  cmd->add_option("--canny-low", p.canny_low, "Canny low threshold (fraction of max gradient)");
  cmd->add_option("--canny-high", p.canny_high, "Canny high threshold (fraction of max gradient)");
  cmd->add_option("--canny-percentile", p.canny_percentile,
                  "Edge magnitude percentile a Canny candidate must reach");
  cmd->add_option("--harris-k", p.harris_k, "Harris k");
  cmd->add_option("--harris-sigma", p.harris_sigma, "Harris window sigma (px)");
  cmd->add_option("--ransac-iters", p.ransac_iterations, "RANSAC iterations");
  cmd->add_option("--ransac-dist", p.ransac_inlier_dist, "RANSAC inlier distance (m)");
}

int RunGen(const GenArgs& a, std::ostream& out) {
  const auto [lo, hi] = ParseFoldRange(a.folds);
  if (a.scenes == 0) return kExitOk;
  SceneOptions options;
  options.min_folds = lo;
  options.max_folds = hi;
  options.noise_sigma = a.noise;
  for (int i = 0; i < a.scenes; ++i) {
    const SynthScene scene = RandomScene(MixSeed(a.seed, static_cast<std::uint64_t>(i)), options);
    const std::string stem = "scene_" + std::to_string(i);
    WriteSceneBundle(scene, a.out, stem);
    out << stem << '\n';
  }
  return kExitOk;
}

int RunSelect(const SelectArgs& a, std::ostream& out, std::ostream& err) {
  const GraspMode mode = ParseMode(a.mode);
  const DepthImage depth = png::ReadDepth(a.depth);
  const RegionProbMap probs = LoadProbMap(a.regions);
  if (probs.width() != depth.width() || probs.height() != depth.height()) {
    Throw(ErrorKind::kFormat, "regions and depth images differ in size");
  }
  const auto start = std::chrono::steady_clock::now();
  const RegionMask masks = ThresholdProbs(probs, a.tau);
  const GraspConfig2D grasp = SelectGrasp(masks, mode, a.k);
  const auto stop = std::chrono::steady_clock::now();
  json record = GraspJson(grasp);
  AddPlan(record, grasp, depth, a.plan);
  if (a.time) {
    err << "selection_ms: "
        << std::chrono::duration<double, std::milli>(stop - start).count() << '\n';
  }
  Emit(record, a.out, a.json || a.out.empty(), out);
  return kExitOk;
}

int RunDetect(const DetectArgs& a, std::ostream& out) {
  const auto method = ParseBaselineMethod(a.method);
  if (!method) Throw(ErrorKind::kParameter, "unknown detector method '" + a.method + "'");
  const DepthImage depth = png::ReadDepth(a.depth);
  std::optional<RgbImage> rgb;
  if (UsesColor(*method)) {
    if (a.rgb.empty()) Throw(ErrorKind::kParameter, a.method + " requires --rgb");
    rgb = png::ReadRgb(a.rgb);
    if (rgb->width() != depth.width() || rgb->height() != depth.height()) {
      Throw(ErrorKind::kFormat, "colour and depth images differ in size");
    }
  }
  std::optional<CameraModel> cam;
  if (!a.plan.camera.empty()) cam = LoadCamera(a.plan.camera);
  if (*method == BaselineMethod::kSegmentEdge && !cam) {
    Throw(ErrorKind::kParameter, "segment-edge requires --camera");
  }
  const GraspConfig2D grasp = BaselineGrasp(*method, depth, rgb ? &*rgb : nullptr,
                                            cam ? &*cam : nullptr, a.params, a.seed);
  json record = GraspJson(grasp);
  AddPlan(record, grasp, depth, a.plan);
  Emit(record, a.out, a.json || a.out.empty(), out);
  return kExitOk;
}

int RunBench(const BenchArgs& a, std::ostream& out) {
  BenchConfig cfg;
  cfg.methods = SplitList(a.methods);
  if (cfg.methods.empty()) Throw(ErrorKind::kParameter, "--methods is empty");
  for (const std::string& m : cfg.methods) {
    if (!IsKnownMethod(m)) Throw(ErrorKind::kParameter, "unknown method '" + m + "'");
  }
  cfg.scenes = a.scenes;
  cfg.seed = a.seed;
  cfg.mode = ParseMode(a.mode);
  cfg.dir_tol_deg = a.tol;
  cfg.k = a.k;
  const auto [lo, hi] = ParseFoldRange(a.folds);
  cfg.scene.min_folds = lo;
  cfg.scene.max_folds = hi;
  cfg.scene.noise_sigma = a.noise;
  cfg.threads = a.threads;
  cfg.baseline = a.params;
  const std::string csv = FormatCsv(RunBenchmark(cfg));
  if (a.out.empty()) {
    out << csv;
  } else {
    std::ofstream f(a.out, std::ios::binary);
    if (!f) Throw(ErrorKind::kIo, "cannot open " + a.out + " for writing");
    f << csv;
    if (!f) Throw(ErrorKind::kIo, "failed writing " + a.out);
  }
  return kExitOk;
}

int RunOverlay(const OverlayArgs& a, std::ostream& err) {
  if (a.image.empty() == a.depth.empty()) {
    Throw(ErrorKind::kParameter, "overlay needs exactly one of --image or --depth");
  }
  const RgbImage base = a.image.empty() ? DepthToRgb(png::ReadDepth(a.depth)) : png::ReadRgb(a.image);
  const RegionProbMap probs = LoadProbMap(a.regions);
  if (probs.width() != base.width() || probs.height() != base.height()) {
    Throw(ErrorKind::kFormat, "regions and base image differ in size");
  }
  const RegionMask masks = ThresholdProbs(probs, a.tau);
  std::optional<GraspConfig2D> grasp;
  try {
    grasp = SelectGrasp(masks, ParseMode(a.mode), a.k);
  } catch (const Error& e) {
    if (ExitCodeFor(e.kind()) != kExitNoCandidates) throw;
    err << "no grasp drawn: " << e.what() << '\n';
  }
  png::WriteRgb8(a.out, RenderOverlay(base, masks, grasp));
  return kExitOk;
}

}  // namespace

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParameter: return kExitUsage;
    case ErrorKind::kNoCandidates:
    case ErrorKind::kNoInnerEdge:
    case ErrorKind::kInsufficientPoints:
    case ErrorKind::kDegenerateInput:
    case ErrorKind::kInvalidDepth:
    case ErrorKind::kZeroVector: return kExitNoCandidates;
    case ErrorKind::kFormat:
    case ErrorKind::kIo: return kExitIo;
  }
  return kExitFailure;
}

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cloth edge and corner grasp planning from depth images and region maps",
               "clothgrasp"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write synthetic folded-cloth scene bundles");
  gen_cmd->add_option("--scenes", gen.scenes, "Number of scenes")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", gen.seed, "Master seed");
  gen_cmd->add_option("--folds", gen.folds, "Fold count range MIN..MAX");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--noise", gen.noise, "Depth noise sigma (m)")->check(CLI::NonNegativeNumber);

  SelectArgs sel;
  auto* sel_cmd = app.add_subcommand("select", "Minimum-uncertainty grasp from a region map");
  sel_cmd->add_option("--depth", sel.depth, "16-bit millimetre depth PNG")->required();
  sel_cmd->add_option("--regions", sel.regions, "Region probability PNG")->required();
  sel_cmd->add_option("--mode", sel.mode, "edge or corner")
      ->check(CLI::IsMember({"edge", "corner"}));
  sel_cmd->add_option("--k", sel.k, "Neighbourhood size for the uncertainty")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  AddTauFlags(sel_cmd, sel.tau);
  sel_cmd->add_option("--out", sel.out, "Write the grasp record here");
  sel_cmd->add_flag("--json", sel.json, "Print the grasp record to stdout");
  sel_cmd->add_flag("--time", sel.time, "Print selection latency to stderr");
  AddPlanFlags(sel_cmd, sel.plan);

  DetectArgs det;
  auto* det_cmd = app.add_subcommand("detect", "Classical baseline grasp proposal");
  det_cmd->add_option("--method", det.method,
                      "canny-depth, canny-color, segment-edge, harris-depth or harris-color")
      ->required()
      ->check(CLI::IsMember(
          {"canny-depth", "canny-color", "segment-edge", "harris-depth", "harris-color"}));
  det_cmd->add_option("--depth", det.depth, "16-bit millimetre depth PNG")->required();
  det_cmd->add_option("--rgb", det.rgb, "Colour PNG (colour methods)");
  det_cmd->add_option("--seed", det.seed, "Sampling seed");
  AddBaselineFlags(det_cmd, det.params);
  det_cmd->add_option("--out", det.out, "Write the grasp record here");
  det_cmd->add_flag("--json", det.json, "Print the grasp record to stdout");
  AddPlanFlags(det_cmd, det.plan);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Success rates on synthetic scenes as CSV");
  bench_cmd->add_option("--methods", bench.methods,
                        "Comma list of ours, nodU, nodP, canny-depth, canny-color, "
                        "segment-edge, harris-depth, harris-color");
  bench_cmd->add_option("--scenes", bench.scenes, "Number of scenes")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "Master seed");
  bench_cmd->add_option("--mode", bench.mode, "edge or corner")
      ->check(CLI::IsMember({"edge", "corner"}));
  bench_cmd->add_option("--tol", bench.tol, "Direction tolerance (degrees)")
      ->check(CLI::Range(0.0, 180.0));
  bench_cmd->add_option("--k", bench.k, "Neighbourhood size for the uncertainty")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  bench_cmd->add_option("--folds", bench.folds, "Fold count range MIN..MAX");
  bench_cmd->add_option("--noise", bench.noise, "Depth noise sigma (m)")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (0: all cores)");
  AddBaselineFlags(bench_cmd, bench.params);
  bench_cmd->add_option("--out", bench.out, "CSV path (stdout when empty)");

  OverlayArgs ov;
  auto* ov_cmd = app.add_subcommand("overlay", "Draw regions and the selected grasp");
  ov_cmd->add_option("--regions", ov.regions, "Region probability PNG")->required();
  ov_cmd->add_option("--image", ov.image, "Colour PNG to draw on");
  ov_cmd->add_option("--depth", ov.depth, "Depth PNG to draw on");
  ov_cmd->add_option("--out", ov.out, "Output PNG")->required();
  ov_cmd->add_option("--mode", ov.mode, "edge or corner")->check(CLI::IsMember({"edge", "corner"}));
  ov_cmd->add_option("--k", ov.k, "Neighbourhood size for the uncertainty")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  AddTauFlags(ov_cmd, ov.tau);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  bool as_json = false;
  try {
    if (*gen_cmd) return RunGen(gen, out);
    if (*sel_cmd) {
      as_json = sel.json;
      return RunSelect(sel, out, err);
    }
    if (*det_cmd) {
      as_json = det.json;
      return RunDetect(det, out);
    }
    if (*bench_cmd) return RunBench(bench, out);
    if (*ov_cmd) return RunOverlay(ov, err);
  } catch (const Error& e) {
    const int code = ExitCodeFor(e.kind());
    err << "error: " << e.what() << '\n';
    err << "reason: " << ToString(e.kind()) << '\n';
    if (as_json) {
      out << json{{"error", std::string(ToString(e.kind()))}, {"message", e.what()}}.dump() << '\n';
    }
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace clothgrasp
