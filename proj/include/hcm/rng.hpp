#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace hcm {

// Deterministic splittable generator. All randomness in the library flows
// from an explicit 64-bit seed plus an optional stream index, so any draw can
// be reproduced in isolation (sample i of a sweep uses Rng(seed, i)) and the
// bit pattern is identical across platforms. No global state anywhere.
//
// Core is splitmix64; normals come from Box-Muller so we do not depend on the
// implementation-defined std::normal_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(finalize(seed)) {}

  Rng(std::uint64_t seed, std::uint64_t stream)
      : state_(finalize(finalize(seed) + 0x6a09e667f3bcc909ull * (stream + 1))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return finalize(state_);
  }

  // Uniform in [0, 1), 53 significant bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal. Consumes exactly two uniforms; no cached spare, so the
  // draw sequence stays a pure function of the call count.
  double next_gaussian() {
    double u1 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  // Complex normal with unit total variance (1/2 per real component).
  std::complex<double> next_complex_gaussian() {
    const double re = next_gaussian();
    const double im = next_gaussian();
    return {re * kInvSqrt2, im * kInvSqrt2};
  }

 private:
  static constexpr double kTwoPi = 6.283185307179586476925286766559;
  static constexpr double kInvSqrt2 = 0.70710678118654752440084436210;

  static std::uint64_t finalize(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace hcm
