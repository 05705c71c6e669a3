#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "sgrace/hash.hpp"

namespace sgrace {

// Deterministic random stream. mt19937_64 output is fixed by the standard,
// and all distributions are implemented here by hand so draws are identical
// across platforms and standard libraries. Streams are single-owner.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  uint64_t seed() const { return seed_; }

  // Child stream derived from the root seed and a salt; independent of how
  // many draws the parent has consumed. Distinct salts give distinct streams.
  Rng fork(uint64_t salt) const {
    return Rng(splitmix64(seed_ ^ (0xd1342543de82ef95ull * (salt + 1))));
  }

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [lo, hi], inclusive, rejection-sampled (unbiased).
  int64_t uniform_int(int64_t lo, int64_t hi) {
    uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
    if (range == 0) return static_cast<int64_t>(engine_());  // full 64-bit span
    uint64_t threshold = (0 - range) % range;
    uint64_t x = engine_();
    while (x < threshold) x = engine_();
    return lo + static_cast<int64_t>(x % range);
  }

  // Standard normal via Box-Muller; the second variate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sgrace
