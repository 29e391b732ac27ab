#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace thurston {

// std::uniform_int_distribution is implementation-defined, so seeded runs
// would differ between standard libraries. mt19937_64 itself is fully
// specified; these helpers keep the whole draw portable.
using Rng = std::mt19937_64;

inline std::uint64_t uniform_below(Rng& g, std::uint64_t n) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % n + 1) % n;
  std::uint64_t x;
  do x = g();
  while (x > limit);
  return x % n;
}

inline std::uint64_t uniform_between(Rng& g, std::uint64_t lo, std::uint64_t hi) {
  return lo + uniform_below(g, hi - lo + 1);
}

}  // namespace thurston
