// Reproducible random numbers. The generator is pinned to std::mt19937_64
// (fully specified by the C++ standard) and uniform doubles are produced by
// the 53-bit mapping u >> 11 * 2^-53, so any conforming implementation
// reproduces the same streams from the same 64-bit seed.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace bargain {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::vector<double> uniform_vector(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform01();
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

// Per-row seed derivation for batch runs: documented as seed + index.
inline std::uint64_t row_seed(std::uint64_t seed, std::size_t index) {
  return seed + static_cast<std::uint64_t>(index);
}

}  // namespace bargain
