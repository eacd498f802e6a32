#pragma once
#include <cmath>
#include <complex>
#include <cstdint>

// Counter-based keyed generation.  Every random quantity in the project is a
// pure function of a small integer tuple, so any entry of any submatrix (or
// any field sample) can be produced independently, in any order, on any
// thread, with identical results.
//
// The mixing function is the SplitMix64 finalizer (Steele, Lea & Flood 2014),
// applied after absorbing each word of the tuple.  This construction is fixed;
// changing it changes every simulated data set.

namespace subwigner::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// 64 uniform bits keyed by (seed, replicate, a, b, stream).
constexpr std::uint64_t keyed_bits(std::uint64_t seed, std::uint64_t replicate,
                                   std::uint64_t a, std::uint64_t b,
                                   std::uint64_t stream) noexcept {
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (replicate + 2 * kGolden));
  h = mix64(h ^ (a + 3 * kGolden));
  h = mix64(h ^ (b + 4 * kGolden));
  h = mix64(h ^ (stream + 5 * kGolden));
  return h;
}

// Uniform double in the open interval (0,1): 52 bits plus a half-ulp offset.
// The offset stays exact at 52 bits, so both endpoints are excluded and
// log(u) is always finite.
constexpr double uniform01(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// Standard normal via Box-Muller from two uniform words; the (cos, sin) pair
// is an independent standard bivariate normal.
inline double gauss(std::uint64_t bits0, std::uint64_t bits1) noexcept {
  const double r = std::sqrt(-2.0 * std::log(uniform01(bits0)));
  return r * std::cos(6.283185307179586476925286766559 * uniform01(bits1));
}

inline std::complex<double> gauss_pair(std::uint64_t bits0, std::uint64_t bits1) noexcept {
  const double r = std::sqrt(-2.0 * std::log(uniform01(bits0)));
  const double t = 6.283185307179586476925286766559 * uniform01(bits1);
  return {r * std::cos(t), r * std::sin(t)};
}

// Stream-domain tags keep the key spaces of unrelated consumers disjoint.
inline constexpr std::uint64_t kStreamEntry = 0;       // matrix entries (substreams 0,1)
inline constexpr std::uint64_t kStreamField = 1 << 8;  // GFF sample vectors

}  // namespace subwigner::rng
