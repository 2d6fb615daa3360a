// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace irsmba {

using Rng = std::mt19937_64;

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed splitting rule: every independent random unit (channel realisation,
/// noise block, shuffle, ...) gets seed = mix(mix(master ^ mix(stream)) + index).
/// Streams keep e.g. channel draws and noise draws for the same index apart.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return mix64(mix64(master ^ mix64(stream)) + index);
}

namespace stream {
inline constexpr std::uint64_t channel = 1;
inline constexpr std::uint64_t noise = 2;
inline constexpr std::uint64_t shuffle = 3;
inline constexpr std::uint64_t pattern = 4;
inline constexpr std::uint64_t psi = 5;
inline constexpr std::uint64_t init = 6;
inline constexpr std::uint64_t training = 7;
inline constexpr std::uint64_t verify = 8;
}  // namespace stream

/// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
inline std::complex<double> complex_gaussian(Rng& rng, double variance) {
  std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

}  // namespace irsmba
