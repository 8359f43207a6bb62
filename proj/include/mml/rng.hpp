#pragma once

// Deterministic cross-platform randomness.
//
// std::mt19937_64 is fully specified by the standard; the distributions are
// not, so uniform doubles are generated by the explicit 53-bit mantissa map
// below. Same seed => same stream on every platform.

#include <cstdint>
#include <random>

namespace mml {

// SplitMix64 finalizer; used to derive independent stream seeds from
// (seed, index) pairs so parallel sweep cells never share a stream.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// Uniform in [0, 1): top 53 bits of the generator output.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace mml
