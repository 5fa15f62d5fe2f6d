#pragma once

#include <cstdint>

namespace curvlab {

// Counter-based random stream: every draw is a pure function of
// (seed, path index, step counter). Paths can therefore be simulated in any
// order, in blocks of any width, and truncating the horizon never changes the
// draws of the surviving prefix. The mixer is the splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t rng_path_key(std::uint64_t seed, std::uint64_t path) {
  return mix64(seed ^ mix64(path * 0x9e3779b97f4a7c15ull + 0x85ebca77c2b2ae63ull));
}

inline std::uint64_t rng_draw_bits(std::uint64_t path_key, std::uint64_t counter) {
  return mix64(path_key + (counter + 1) * 0x9e3779b97f4a7c15ull);
}

// Maps 64 random bits to the open interval (0,1) as (k + 1/2) * 2^-52 with
// k < 2^52. Every intermediate is exactly representable, so the scalar and
// vector kernels agree bit for bit, and the result never touches 0 or 1.
inline double rng_u01(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// Natural log built from mantissa reduction and an odd atanh series. Only
// +,-,*,/ are used, in a fixed evaluation order, which keeps the scalar and
// AVX2 paths bit-identical (libm's log makes no such promise across builds).
// Relative accuracy is ~1e-14 for normal positive doubles, far below what the
// inverse-CDF tails need.
double portable_log(double x);

// Inverse of the standard normal CDF on (0,1): central rational
// approximation with sqrt(-2 log p) tail branches, |relative error| < 1.2e-9.
double normal_icdf(double u);

// Convenience draw: standard normal from (seed-derived key, counter).
inline double rng_normal(std::uint64_t path_key, std::uint64_t counter) {
  return normal_icdf(rng_u01(rng_draw_bits(path_key, counter)));
}

}  // namespace curvlab
