#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "richcore/types.hpp"

namespace richcore {

/// Seeded generator with hand-rolled variate transforms. std::mt19937_64 is
/// bit-exact across implementations; the distributions in <random> are not,
/// so uniform and Gaussian draws are derived here to keep --seed reproducible
/// everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Unbiased integer in [0, n) via rejection.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller.
  double gaussian();

  /// Distinct indices in [0, n), returned sorted.
  std::vector<Index> sample_without_replacement(Index n, Index r);

 private:
  std::mt19937_64 eng_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

Matrix random_gaussian(Rng& rng, Index rows, Index cols);

/// n x ell matrix with orthonormal columns drawn from the Gaussian ensemble.
Matrix random_orthonormal(Rng& rng, Index n, Index ell);

}  // namespace richcore
