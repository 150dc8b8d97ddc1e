#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace slowtrap {

/// Engine used for every simulation stream.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer. A bijection on 64-bit words with good avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Seed of stream `index` under master `seed`. Distinct indices give distinct seeds.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed + kGoldenGamma) + (index + 1) * kGoldenGamma);
}

/// Hashes a tuple of integers into one stream index.
constexpr std::uint64_t combine_index(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(a * 0xD1B54A32D192ED03ULL + mix64(b + kGoldenGamma));
}

inline Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(derive_seed(seed, index));
}

/// Maps 64 random bits to a uniform in (0, 1]; never returns 0.
constexpr double bits_to_open_unit(std::uint64_t bits) noexcept {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

inline double uniform_open(Rng& rng) { return bits_to_open_unit(rng()); }

/// Unit-mean exponential variate.
inline double unit_exponential(Rng& rng) { return -std::log(uniform_open(rng)); }

inline double standard_normal(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

}  // namespace slowtrap
