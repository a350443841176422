#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "richcore/coreset.hpp"
#include "richcore/rng.hpp"

namespace richcore {

/// Exact binomial coefficient for n <= 64 (fits in 64 bits).
std::uint64_t binomial(unsigned n, unsigned k);

/// Instance on which any target-agnostic coreset of the given rows must lose
/// a factor n/r: A has orthonormal columns with first column 1/sqrt(n), and
/// the unit target is supported exactly off the coreset rows.
struct AgnosticHardInstance {
  Matrix A;
  Vector b;
  std::vector<Index> coreset_indices;
  double guaranteed_ratio;  // n / r
};

AgnosticHardInstance hard_instance_for_coreset(Index n, Index d,
                                               std::vector<Index> coreset_indices);

/// Enumerates every size-r index set (n <= 16), builds the matching hard
/// target, solves the full and coreset problems exactly, and returns the
/// smallest achieved ratio. The result is never below n/r.
double worst_ratio_over_coresets(Index n, Index d, Index r);

/// A distribution over size-r coresets: (index set, probability) pairs.
using CoresetDistribution = std::vector<std::pair<std::vector<Index>, double>>;

CoresetDistribution uniform_coreset_distribution(Index n, Index r);

/// All size-r index subsets of [0, n) in lexicographic order (n <= 16 guard
/// applies at the call sites that enumerate).
std::vector<std::vector<Index>> enumerate_index_sets(Index n, Index r);

/// The size-ell target set a given sampler is most likely to miss, the unit
/// target supported on it, and the exact miss-probability floor
/// C(n-r, ell) / C(n, ell). A sampler that misses pays a ratio of at least
/// n / (n - ell).
struct HardTarget {
  std::vector<Index> target;
  Vector b;
  double success_probability_lower_bound;
};

HardTarget hard_target_for_sampler(Index n, Index r, Index ell,
                                   const CoresetDistribution& distribution);

/// Minimal instance showing that coresets of size equal to the rank cannot
/// carry a guarantee: two opposite data points with equal targets.
RegressionInstance two_point_instance();

}  // namespace richcore
