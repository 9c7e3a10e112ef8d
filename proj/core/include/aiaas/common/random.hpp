#pragma once

#include <cstdint>
#include <random>

namespace aiaas {

// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. Conversions to real numbers are done here rather than through
// <random> distributions, whose algorithms are implementation-defined, so a
// seed reproduces the same values with any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller; caches the second variate.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer. Used for counter-based noise that must be a pure
/// function of its coordinates.
std::uint64_t mix64(std::uint64_t x);

/// Hashes (seed, a, b, c) into a uniform double in [0, 1).
double hash_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                    std::uint64_t c = 0);

/// Standard normal that is a pure function of (seed, a, b, c).
double hash_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                   std::uint64_t c = 0);

}  // namespace aiaas
