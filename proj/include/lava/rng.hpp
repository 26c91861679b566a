#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lava {

/// Every random draw in the library goes through an explicit stream of this type.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds a base seed and a path of stream labels into one seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(base);
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

inline Rng make_stream(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  return Rng{derive_seed(base, path)};
}

// Stream labels. Values are part of the determinism contract; do not renumber.
namespace stream {
inline constexpr std::uint64_t kTruthInit = 1;
inline constexpr std::uint64_t kTruthMotion = 2;
inline constexpr std::uint64_t kMeasurement = 3;
inline constexpr std::uint64_t kBelief = 4;
inline constexpr std::uint64_t kTrial = 5;
inline constexpr std::uint64_t kBench = 6;
}  // namespace stream

}  // namespace lava
