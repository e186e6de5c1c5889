#pragma once
// Random streams. The engine draws from std::mt19937_64; every stream is
// seeded through SplitMix64 so that seeds derived for distinct (run, purpose)
// or (grid point, trial) pairs are decorrelated. Reproducibility holds for a
// given standard library build.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace krsim {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Child seed for the stream identified by `path` under `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(seed);
  for (std::uint64_t p : path) s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

// Stream purposes under a run seed.
inline constexpr std::uint64_t kStreamSampling = 0;
inline constexpr std::uint64_t kStreamPanel = 1;
inline constexpr std::uint64_t kStreamStartDensity = 2;

}  // namespace krsim
