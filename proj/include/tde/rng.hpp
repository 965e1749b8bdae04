// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "tde/types.hpp"

namespace tde {

/// SplitMix64 mixing step. Used to derive independent stream seeds from a
/// base seed plus an index, so per-trial / per-branch streams are
/// reproducible and uncorrelated regardless of scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x51ed27f4a7c15ULL));
}

/// Deterministic random source. mt19937_64 is fully specified by the
/// standard, and sampling below avoids std::uniform_int_distribution /
/// std::normal_distribution, whose algorithms are implementation-defined.
/// Output is therefore bit-identical across platforms and standard
/// libraries for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Unbiased uniform draw from {0, ..., n-1} via rejection sampling.
  std::uint32_t uniform_index(std::uint32_t n) {
    const std::uint64_t span = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t draw = engine_();
    while (draw >= limit) draw = engine_();
    return static_cast<std::uint32_t>(draw % span);
  }

  /// Uniform double in (0, 1]; never returns 0 so log() is safe.
  double uniform_pos() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
  }

  /// Standard normal pair via Box-Muller.
  void normal_pair(double& a, double& b) {
    const double u1 = uniform_pos();
    const double u2 = uniform_pos();
    const double r = std::sqrt(-2.0 * std::log(u1));
    a = r * std::cos(2.0 * M_PI * u2);
    b = r * std::sin(2.0 * M_PI * u2);
  }

  /// Complex Gaussian with the given per-component standard deviation.
  Complex complex_normal(double sigma) {
    double a, b;
    normal_pair(a, b);
    return Complex(sigma * a, sigma * b);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tde
