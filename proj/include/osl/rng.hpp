#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace osl {

// SplitMix64 finalizer; used to derive independent stream seeds from a base
// seed and a stream index.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

// A seeded random stream. Draws are produced from raw 64-bit engine output
// rather than <random> distributions so results are identical across
// standard library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform index in [0, n); n must be positive.
  std::size_t index(std::size_t n);

  // Standard normal via Box-Muller (one value per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace osl
