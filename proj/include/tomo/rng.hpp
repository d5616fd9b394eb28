#pragma once

#include <cstdint>
#include <random>

#include "tomo/types.hpp"

namespace tomo {

/// splitmix64 step; used to derive independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic seed for substream (a, b) of a master seed. Trials, cells
/// and pixels each get their own stream so results do not depend on
/// execution order or thread count.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(master) ^ a) ^ b);
}

/// Seeded RNG stream with the few distributions the toolkit needs.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }

  /// Circularly-symmetric complex Gaussian with total variance `variance`
  /// (real and imaginary parts each carry variance/2).
  cxd complex_gaussian(double variance) {
    const double s = std::sqrt(variance / 2.0);
    const double re = s * normal();
    const double im = s * normal();
    return {re, im};
  }

  /// Unit-modulus complex number with uniform phase.
  cxd random_phase() {
    const double ph = uniform(0.0, kTwoPi);
    return {std::cos(ph), std::sin(ph)};
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace tomo
