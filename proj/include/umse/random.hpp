#pragma once

#include <cstdint>
#include <random>

namespace umse {

using Engine = std::mt19937_64;

// Derives an independent stream seed from a parent seed and a stream tag.
// The tag is spread by the golden-ratio increment and the result is passed
// through the SplitMix64 finalizer:
//
//   z = seed + (tag + 1) * 0x9E3779B97F4A7C15
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  std::uint64_t z = seed + (tag + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Engine make_engine(std::uint64_t seed, std::uint64_t tag) {
  return Engine(mix_seed(seed, tag));
}

}  // namespace umse
