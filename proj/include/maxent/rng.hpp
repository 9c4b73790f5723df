#pragma once

#include <cstdint>
#include <random>

namespace maxent {

// Seedable random source used everywhere randomness is needed.
//
// Built on std::mt19937_64 (a fully specified algorithm) with fixed
// mappings to doubles and bounded integers, so a given seed reproduces
// the same stream on every platform. std::uniform_*_distribution is
// deliberately avoided: its output is implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform double in [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

  std::uint64_t raw() { return gen_(); }

private:
  std::mt19937_64 gen_;
};

}  // namespace maxent
