#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cascade {

// Finalizer from splitmix64; full-avalanche mix of one 64-bit word.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Order-sensitive combination of structured seed parts, e.g.
// mix_seed({master, replica}). Used everywhere a generator is derived from
// coordinates so that streams are reproducible and uncorrelated.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (std::uint64_t p : parts) h = mix64(h ^ p);
  return h;
}

// Deterministic generator wrapper. mt19937_64's output sequence is fixed by
// the standard, and the uniform/below mappings below are implemented here
// rather than with std distributions so results are identical across
// compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound); bound > 0. Rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX / bound * bound;
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % bound;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace cascade
