// Seeded random number generation with a fixed, implementation-independent
// draw discipline: every distribution is derived from the raw 64-bit stream
// by explicit arithmetic, so identical seeds give identical results on any
// conforming platform.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace pathspin {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Fixed rule for deriving independent sub-stream seeds (per trial, per
/// setting pair) from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x517CC1B727220A95ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// N(0, stddev^2) via Box-Muller (cosine branch only; two uniforms per
  /// draw, no cached spare). stddev = 0 consumes draws and returns exactly 0.
  double gaussian(double stddev) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return stddev * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pathspin
