#pragma once

// Counter-based random normals: draw i is a pure function of (seed, i), so
// sampling can be sharded across threads or processes and still reproduce
// bit-for-bit in any execution order.

#include <cmath>
#include <cstdint>

namespace hetphase {

namespace detail {

// SplitMix64 output function; the k-th value of the stream with the given
// seed, used here as a stateless counter hash.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + (k + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

} // namespace detail

struct NormalPair {
  double g1 = 0.0;
  double g2 = 0.0;
};

/// Two independent standard normal deviates for the given (seed, index),
/// via Box-Muller on two counter-hash uniforms.
inline NormalPair counter_normal_pair(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t v1 = detail::splitmix64_at(seed, 2 * index);
  const std::uint64_t v2 = detail::splitmix64_at(seed, 2 * index + 1);
  const double u1 = static_cast<double>((v1 >> 11) + 1) * 0x1p-53; // (0, 1]
  const double u2 = static_cast<double>(v2 >> 11) * 0x1p-53;      // [0, 1)
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * 3.14159265358979323846 * u2;
  return NormalPair{r * std::cos(phi), r * std::sin(phi)};
}

} // namespace hetphase
