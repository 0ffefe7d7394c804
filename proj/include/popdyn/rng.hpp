#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace popdyn::rng {

// Counter-based generator: every draw is a hash of (seed, stream, round,
// counter), so ensemble runs, agents and rounds get independent substreams
// without any shared mutable state.

// Round id reserved for initial-state sampling; simulation rounds use 0..horizon.
inline constexpr std::uint64_t kInitRound = ~0ull;

// MurmurHash3 64-bit finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdull;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ull;
  z ^= z >> 33;
  return z;
}

inline std::uint64_t hash4(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  constexpr std::uint64_t gold = 0x9e3779b97f4a7c15ull;
  std::uint64_t h = mix64(a + gold);
  h = mix64(h ^ (b + 2 * gold));
  h = mix64(h ^ (c + 3 * gold));
  h = mix64(h ^ (d + 4 * gold));
  return h;
}

struct Stream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t round = 0;
  std::uint64_t counter = 0;

  std::uint64_t next_u64() { return hash4(seed, stream, round, counter++); }

  // Uniform on [0, 1) from the top 53 bits.
  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; u is pulled into (0, 1] so the log stays finite.
  double normal() {
    double u = 1.0 - u01();
    double v = u01();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }
};

}  // namespace popdyn::rng
