#pragma once

#include <cstdint>
#include <random>

namespace mixlab {

// Seed for one generator invocation. Identical (master, stream) pairs give
// identical output on every platform; bumping `stream` yields an independent
// substream under the same master seed.
struct Seed {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  Seed next_stream() const { return Seed{master, stream + 1}; }
};

// mt19937_64 plus portable draw helpers. The standard pins the engine's
// output bit-for-bit; std::uniform_*_distribution does not, so the helpers
// below implement the draws themselves.
class Rng {
 public:
  explicit Rng(Seed s) : eng_(mix(s)) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), bound >= 1, unbiased (masked rejection).
  std::uint64_t below(std::uint64_t bound);

 private:
  static std::uint64_t mix(Seed s);

  std::mt19937_64 eng_;
};

}  // namespace mixlab
