#pragma once

#include <cstdint>
#include <random>

namespace clothgrasp {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

/// Seeded generator whose draws do not depend on the standard library's
/// distribution implementations, so sequences are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  /// Uniform integer in [0, n); n must be > 0.
  std::uint64_t UniformInt(std::uint64_t n);
  /// Uniform in [0, 1) with 53 random bits.
  double Uniform01();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }
  /// Standard normal via Box-Muller.
  double Normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace clothgrasp
