#pragma once

#include <cstdint>

namespace latqfi {

// splitmix64 finalizer (Vigna's constants); stateless, so draws are addressed
// by (key, counter) and identical on every platform.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the top 53 bits of a keyed counter draw.
inline double u01(std::uint64_t key, std::uint64_t counter) {
  return static_cast<double>(splitmix64(key ^ counter) >> 11) * 0x1.0p-53;
}

} // namespace latqfi
