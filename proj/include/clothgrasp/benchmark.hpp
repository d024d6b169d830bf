#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clothgrasp/detectors.hpp"
#include "clothgrasp/graspsel.hpp"
#include "clothgrasp/synthcloth.hpp"

namespace clothgrasp {

/// Method names accepted by the benchmark: "ours", "nodU", "nodP" and the
/// baseline names of ToString(BaselineMethod).
bool IsKnownMethod(const std::string& name);
const std::vector<std::string>& AllMethods();

struct BenchConfig {
  std::vector<std::string> methods{"ours", "nodU", "nodP"};
  int scenes = 200;
  std::uint64_t seed = 42;
  GraspMode mode = GraspMode::kEdge;
  double dir_tol_deg = kDefaultDirectionTolDeg;
  std::size_t k = kDefaultNeighbors;
  SceneOptions scene;
  BaselineParams baseline;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct MethodStats {
  std::string method;
  int scenes = 0;
  int successes = 0;
  int misdetection = 0;
  int direction_error = 0;  // includes blocked approaches
  int no_candidates = 0;

  double rate() const { return scenes > 0 ? static_cast<double>(successes) / scenes : 0.0; }
};

/// Proposes a grasp with the named method on a scene. Our method and the
/// ablations see the ground-truth masks, baselines the rendered images.
GraspConfig2D ProposeGrasp(const std::string& method, const SynthScene& scene, GraspMode mode,
                           std::size_t k, const BaselineParams& params, std::uint64_t seed);

/// Outcome of one method on one scene; no-candidate errors become failures.
GraspOutcome RunTrial(const std::string& method, const SynthScene& scene, const BenchConfig& cfg);

/// Scene i uses seed MixSeed(cfg.seed, i). Rows follow cfg.methods.
std::vector<MethodStats> RunBenchmark(const BenchConfig& cfg);

std::string FormatCsv(const std::vector<MethodStats>& rows);

}  // namespace clothgrasp
