#pragma once

#include <cstdint>
#include <random>

namespace nearunit {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to turn (seed, counter) tuples into well-mixed
// engine seeds so that neighbouring counters give unrelated streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based split of a master seed. The stream for (seed, index, attempt)
// depends on nothing else, so replications can run in any order on any thread.
inline Rng substream(std::uint64_t seed, std::uint64_t index, std::uint64_t attempt = 0) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ (index * 0xd1b54a32d192ed03ULL));
  s = splitmix64(s ^ (attempt * 0x8cb92ba72f3d8dd7ULL));
  return Rng{s};
}

}  // namespace nearunit
