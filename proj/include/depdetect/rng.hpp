#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dd {

// std::mt19937_64 output is pinned by the standard; the std:: distributions
// are not. Sampling helpers below are written out so that seeded runs are
// bit-identical across standard libraries.
using Rng = std::mt19937_64;

// Unbiased draw from [0, bound). bound must be > 0.
inline std::uint64_t uniform_u64(Rng& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0u - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

// Draw from [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

// Fisher-Yates.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_u64(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// splitmix64 finalizer; used to derive independent seed streams.
inline std::uint64_t mix_bits(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return mix_bits(mix_bits(a) ^ (0x9e3779b97f4a7c15ull + b));
}

inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace dd
