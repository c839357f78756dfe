#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "mcw/types.hpp"

namespace mcw {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Generator for stream (a, b) of a master seed. Streams depend only on the
/// indices, so work can be split across threads in any order.
inline Rng make_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  const std::uint64_t s = mix_seed(mix_seed(mix_seed(master) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return Rng(seq);
}

/// Circularly symmetric complex Gaussian with E|z|^2 = variance.
inline cplx complex_gaussian(Rng& rng, double variance = 1.0) {
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

inline CVector complex_gaussian_vector(Rng& rng, Index n, double variance = 1.0) {
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = complex_gaussian(rng, variance);
  return v;
}

}  // namespace mcw
