#pragma once

#include <cstdint>
#include <random>

namespace sensorlift {

using Rng = std::mt19937_64;

// Per-snapshot substream rule: seed_s = master ^ s (documented in the module
// contract; keeps parallel generation order-independent).
inline std::uint64_t snapshot_seed(std::uint64_t master, std::uint64_t s) {
  return master ^ s;
}

// SplitMix64 finalizer; used to derive decorrelated seeds for named purposes
// (init / batch stream per stage) from one master seed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace sensorlift
