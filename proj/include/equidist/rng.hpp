#pragma once

// Counter-based random stream: every draw is a pure function of
// (seed, stream, counter), so parallel evaluation order cannot change results.

#include <cstdint>

namespace equidist {

inline constexpr std::uint64_t kGolden64 = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer (bijective mixer)
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t rand_word(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  std::uint64_t h = mix64(seed + kGolden64 * (stream + 1));
  return mix64(h + kGolden64 * (counter + 1));
}

// Uniform in [0, 1)
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return static_cast<double>(rand_word(seed, stream, counter) >> 11) * 0x1.0p-53;
}

// Uniform in (0, 1]
inline double uniform01_pos(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return static_cast<double>((rand_word(seed, stream, counter) >> 11) + 1) * 0x1.0p-53;
}

}  // namespace equidist
