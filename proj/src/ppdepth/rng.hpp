#pragma once

#include <cstdint>
#include <random>

namespace ppdepth {

// splitmix64 step. Only used to spread user seeds into substream seeds;
// all actual variate generation runs on mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent generator for substream `index` of `seed`. Work unit i always
// sees the same stream no matter how the units are batched across workers.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  std::uint64_t mixed = splitmix64(s);
  s = mixed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  return std::mt19937_64(splitmix64(s));
}

}  // namespace ppdepth
