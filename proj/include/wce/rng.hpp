#pragma once

#include <cstdint>
#include <random>

#include "wce/measure_space.hpp"

namespace wce {

// Deterministic random source. The uniform mapping is spelled out instead of
// going through std::uniform_real_distribution, whose output sequence is
// implementation-defined; reports built from these draws must be byte-stable
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int index(int n) {
    int i = static_cast<int>(uniform() * n);
    return i >= n ? n - 1 : i;
  }

  std::uint64_t bits() { return gen_(); }

  Complex box() { return Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0)); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace wce
