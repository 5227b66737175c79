#pragma once

// Reproducible random streams for the experiments.
//
// SplitMix64 is counter based: output i is mix(seed + (i + 1) * gamma) with
// gamma = 0x9E3779B97F4A7C15 and the mixing constants below, so any stream
// position can be recomputed from the seed alone.  Normal deviates come from
// Box-Muller on top of it (not std::normal_distribution, whose algorithm is
// library specific), so streams match across standard libraries.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace positflow {

class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal(double mean, double sigma) {
    // (0, 1] keeps log away from 0.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return mean + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

// Independent stream for a (seed, salt) pair, e.g. one per sweep point.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return SplitMix64::mix(seed ^ SplitMix64::mix(salt + SplitMix64::kGamma));
}

enum class InputDistribution { TruncatedNormal, Uniform };

inline constexpr double kTruncatedNormalSigma = 0.25;

// Values in [-1, 1]: N(0, 0.25) with rejection outside the interval, or
// uniform.
inline double sample_input(SplitMix64& rng, InputDistribution dist) {
  if (dist == InputDistribution::Uniform) return rng.uniform(-1.0, 1.0);
  for (;;) {
    const double v = rng.normal(0.0, kTruncatedNormalSigma);
    if (v >= -1.0 && v <= 1.0) return v;
  }
}

inline std::string_view to_string(InputDistribution d) {
  return d == InputDistribution::Uniform ? "uniform" : "truncnormal";
}

}  // namespace positflow
