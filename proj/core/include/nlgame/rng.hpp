#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nlgame {

/// Deterministic RNG for property suites and search restarts. Draws are
/// derived from raw mt19937_64 words (not std distributions) so sequences are
/// reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, 1).
  double next_double() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform in {0, ..., k-1}.
  int next_int(int k) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(k)); }

  /// Exp(1); normalized vectors of these are symmetric Dirichlet(1) draws.
  double next_exponential() { return -std::log1p(-next_double()); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace nlgame
