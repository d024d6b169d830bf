#include "clothgrasp/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

#include "clothgrasp/errors.hpp"
#include "clothgrasp/rng.hpp"

namespace clothgrasp {
namespace {

// FNV-1a, so a method's random stream depends on its name rather than its
// position in the method list.
std::uint64_t NameHash(const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

const std::vector<std::string>& AllMethods() {
  static const std::vector<std::string> kMethods{
      "ours",         "nodU",         "nodP",         "canny-depth",
      "canny-color",  "segment-edge", "harris-depth", "harris-color"};
  return kMethods;
}

bool IsKnownMethod(const std::string& name) {
  const auto& all = AllMethods();
  return std::find(all.begin(), all.end(), name) != all.end();
}

GraspConfig2D ProposeGrasp(const std::string& method, const SynthScene& scene, GraspMode mode,
                           std::size_t k, const BaselineParams& params, std::uint64_t seed) {
  const RegionMask& masks = GroundTruthMasks(scene);
  GraspConfig2D g;
  if (method == "ours") {
    g = SelectGrasp(masks, mode, k);
  } else if (method == "nodU") {
    g = AblationNoDirectionalUncertainty(masks, seed, mode);
  } else if (method == "nodP") {
    g = AblationNoDirectionPrediction(masks, seed, mode);
  } else if (const auto baseline = ParseBaselineMethod(method)) {
    g = BaselineGrasp(*baseline, scene.depth, UsesColor(*baseline) ? &scene.rgb : nullptr,
                      &scene.cam, params, seed);
  } else {
    Throw(ErrorKind::kParameter, "unknown method '" + method + "'");
  }
  g.mode = mode;
  return g;
}

GraspOutcome RunTrial(const std::string& method, const SynthScene& scene, const BenchConfig& cfg) {
  try {
    const GraspConfig2D g = ProposeGrasp(method, scene, cfg.mode, cfg.k, cfg.baseline,
                                         MixSeed(scene.seed, NameHash(method)));
    return Evaluate(g, scene, cfg.dir_tol_deg);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::kNoCandidates:
      case ErrorKind::kNoInnerEdge:
      case ErrorKind::kInsufficientPoints:
      case ErrorKind::kDegenerateInput:
        return {false, FailureReason::kNoCandidates, 0.0};
      default:
        throw;
    }
  }
}

std::vector<MethodStats> RunBenchmark(const BenchConfig& cfg) {
  if (cfg.scenes < 1) Throw(ErrorKind::kParameter, "benchmark needs at least one scene");
  for (const std::string& m : cfg.methods) {
    if (!IsKnownMethod(m)) Throw(ErrorKind::kParameter, "unknown method '" + m + "'");
  }
  const std::size_t n_scenes = static_cast<std::size_t>(cfg.scenes);
  const std::size_t n_methods = cfg.methods.size();
  std::vector<FailureReason> outcomes(n_scenes * n_methods, FailureReason::kNone);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  const auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_scenes) return;
      try {
        const SynthScene scene = RandomScene(MixSeed(cfg.seed, i), cfg.scene);
        for (std::size_t j = 0; j < n_methods; ++j) {
          outcomes[i * n_methods + j] = RunTrial(cfg.methods[j], scene, cfg).reason;
        }
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n_scenes));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<MethodStats> rows(n_methods);
  for (std::size_t j = 0; j < n_methods; ++j) {
    MethodStats& row = rows[j];
    row.method = cfg.methods[j];
    row.scenes = cfg.scenes;
    for (std::size_t i = 0; i < n_scenes; ++i) {
      switch (outcomes[i * n_methods + j]) {
        case FailureReason::kNone: ++row.successes; break;
        case FailureReason::kMisdetection: ++row.misdetection; break;
        case FailureReason::kDirectionError:
        case FailureReason::kBlockedApproach: ++row.direction_error; break;
        case FailureReason::kNoCandidates: ++row.no_candidates; break;
      }
    }
  }
  return rows;
}

std::string FormatCsv(const std::vector<MethodStats>& rows) {
  std::ostringstream out;
  out << "method,scenes,successes,rate,misdetection,direction_error,no_candidates\n";
  char rate[32];
  for (const MethodStats& r : rows) {
    std::snprintf(rate, sizeof rate, "%.4f", r.rate());
    out << r.method << ',' << r.scenes << ',' << r.successes << ',' << rate << ','
        << r.misdetection << ',' << r.direction_error << ',' << r.no_candidates << '\n';
  }
  return out.str();
}

}  // namespace clothgrasp
