#pragma once

#include <cstdint>
#include <random>

namespace depthkit {

/// mt19937_64 with hand-rolled uniform mappings. std::uniform_real_distribution
/// is implementation-defined, so sampled values would not be reproducible across
/// standard libraries; the shift-multiply mapping below is.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // modulo bias is < 2^-40 for the grid sizes used here
    return engine_() % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace depthkit
