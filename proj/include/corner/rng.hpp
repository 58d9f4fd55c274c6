#pragma once
#include <cstdint>

namespace corner {

// 64-bit linear congruential generator,
//   x <- 6364136223846793005 * x + 1442695040888963407  (mod 2^64).
// uniform() takes the top 53 bits, so streams are identical on every platform.
struct lcg {
  std::uint64_t state;
  explicit lcg(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state;
  }
  double uniform() {  // [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int uniform_int(int a, int b) {  // inclusive range
    return a + static_cast<int>(next_u64() % static_cast<std::uint64_t>(b - a + 1));
  }
};

}  // namespace corner
