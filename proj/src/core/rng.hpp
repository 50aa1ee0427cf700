#pragma once

#include <cstdint>
#include <random>

namespace tsep {

// Seeded uniform doubles from the raw mt19937_64 stream. The standard
// pins the engine's output bit-for-bit; distributions it does not, so
// doubles are derived from the bits directly.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  double uniform01() { return (engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tsep
