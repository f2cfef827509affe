#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace b92 {

/// Deterministic random stream for the simulator.
///
/// Wraps std::mt19937_64 (bit-exact across platforms) and converts raw
/// 64-bit words to doubles explicitly, so a (seed, draw sequence) pair
/// reproduces the same stream everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Fair bit.
  int bit() { return uniform() < 0.5 ? 0 : 1; }

  /// True with probability p.
  bool bernoulli(double p) { return uniform() < p; }

  /// Number of trials up to and including the first success when each
  /// trial succeeds with probability p (support {1, 2, ...}).
  /// p == 1 always yields 1 and p <= 0 yields "never" (UINT64_MAX);
  /// the draw is consumed either way.
  std::uint64_t geometric_gap(double p) {
    const double u = uniform();
    if (p >= 1.0) {
      return 1;
    }
    if (p <= 0.0) {
      return UINT64_MAX;
    }
    // Inverse CDF; log1p keeps precision for small p and u.
    const double g = std::floor(std::log1p(-u) / std::log1p(-p));
    if (g >= 1.8e19) {
      return UINT64_MAX;
    }
    return 1 + static_cast<std::uint64_t>(g);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace b92
