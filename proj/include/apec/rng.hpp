#pragma once

#include <cstdint>

namespace apec {

// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based uniform draw in [0, 1) keyed by (seed, stream, counter); no
// generator state, so results do not depend on evaluation order.
constexpr double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept {
  const std::uint64_t bits = mix64(mix64(mix64(seed) ^ stream) ^ counter);
  return static_cast<double>(bits >> 11) * 0x1p-53;
}

}  // namespace apec
