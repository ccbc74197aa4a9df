#ifndef SUPERSEL_RNG_HPP
#define SUPERSEL_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace supersel {

/// splitmix64 finalizer; decorrelates (seed, stream) pairs.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Generator for an independent stream. Seeding by (seed, stream) keeps
/// parallel sweeps bit-reproducible regardless of scheduling: every task
/// derives its generator from its own index, never from a shared one.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return std::mt19937_64(mix_seed(seed, stream));
}

inline std::complex<double> random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

}  // namespace supersel

#endif
