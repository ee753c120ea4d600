#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace cmsa {

// Seeded random generator used wherever the toolkit draws random numbers.
//
// All derivations (bounded integers, reals, shuffles) are spelled out on top
// of the raw mt19937_64 stream instead of going through std::*_distribution,
// whose output is implementation defined. Two runs with the same seed produce
// the same results on any platform, which several persistence and
// reproducibility contracts rely on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(bounded(i))]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cmsa
