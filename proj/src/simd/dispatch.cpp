#include "kernels_internal.hpp"

#include <atomic>

namespace clothgrasp::simd {
namespace {

Level Detect() {
#if defined(CLOTHGRASP_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Level::kAvx2;
#endif
#if defined(CLOTHGRASP_HAVE_NEON)
  return Level::kNeon;  // mandatory on aarch64
#endif
  return Level::kScalar;
}

std::atomic<Level>& ActiveSlot() {
  static std::atomic<Level> level{DetectedLevel()};
  return level;
}

}  // namespace

std::string_view ToString(Level level) {
  switch (level) {
    case Level::kScalar: return "scalar";
    case Level::kAvx2: return "avx2";
    case Level::kNeon: return "neon";
  }
  return "unknown";
}

Level DetectedLevel() {
  static const Level level = Detect();
  return level;
}

bool IsSupported(Level level) {
  if (level == Level::kScalar) return true;
  return level == DetectedLevel();
}

Level ActiveLevel() { return ActiveSlot().load(std::memory_order_relaxed); }

bool SetActiveLevel(Level level) {
  if (!IsSupported(level)) return false;
  ActiveSlot().store(level, std::memory_order_relaxed);
  return true;
}

const Kernels& ForLevel(Level level) {
  if (!IsSupported(level)) return ScalarKernels();
  switch (level) {
#if defined(CLOTHGRASP_HAVE_AVX2)
    case Level::kAvx2: return Avx2Kernels();
#endif
#if defined(CLOTHGRASP_HAVE_NEON)
    case Level::kNeon: return NeonKernels();
#endif
    default: return ScalarKernels();
  }
}

const Kernels& Active() { return ForLevel(ActiveLevel()); }

}  // namespace clothgrasp::simd
