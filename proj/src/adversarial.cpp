#include "richcore/adversarial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "richcore/linalg.hpp"
#include "richcore/solvers.hpp"

namespace richcore {

namespace {

constexpr Index kEnumerationGuard = 16;
constexpr std::uint64_t kCompletionSeed = 0x7a3c9d51b2e64f08ULL;

std::uint32_t to_mask(const std::vector<Index>& set) {
  std::uint32_t mask = 0;
  for (Index i : set) mask |= (1u << static_cast<unsigned>(i));
  return mask;
}

}  // namespace

std::uint64_t binomial(unsigned n, unsigned k) {
  if (n > 64) throw precondition_error("exact binomial limited to n <= 64");
  if (k > n) return 0;
  // Pascal row by row; every entry is at most C(64, 32) < 2^63.
  std::array<std::uint64_t, 65> row{};
  row[0] = 1;
  for (unsigned i = 1; i <= n; ++i) {
    for (unsigned j = i; j > 0; --j) row[j] += row[j - 1];
  }
  return row[k];
}

AgnosticHardInstance hard_instance_for_coreset(Index n, Index d,
                                               std::vector<Index> coreset_indices) {
  const Index r = static_cast<Index>(coreset_indices.size());
  if (d < 1 || d > n) throw precondition_error("need 1 <= d <= n");
  if (r < 1 || r >= n) throw precondition_error("coreset must satisfy 1 <= r < n");
  std::vector<Index> sorted = coreset_indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw precondition_error("coreset indices must be distinct");
  }
  if (sorted.front() < 0 || sorted.back() >= n) {
    throw precondition_error("coreset index out of range");
  }

  // Complete 1/sqrt(n) to d orthonormal columns; the construction only pins
  // the first column, the rest may be any orthonormal completion.
  Matrix seed(n, d);
  seed.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  Rng rng(kCompletionSeed);
  for (Index j = 1; j < d; ++j) {
    for (Index i = 0; i < n; ++i) seed(i, j) = rng.gaussian();
  }
  Eigen::HouseholderQR<Matrix> qr(seed);
  Matrix A = qr.householderQ() * Matrix::Identity(n, d);
  if (A(0, 0) < 0.0) A.col(0) = -A.col(0);

  Vector b = Vector::Zero(n);
  const double value = 1.0 / std::sqrt(static_cast<double>(n - r));
  std::vector<bool> in_coreset(static_cast<std::size_t>(n), false);
  for (Index i : sorted) in_coreset[static_cast<std::size_t>(i)] = true;
  for (Index i = 0; i < n; ++i) {
    if (!in_coreset[static_cast<std::size_t>(i)]) b(i) = value;
  }

  return AgnosticHardInstance{std::move(A), std::move(b), std::move(coreset_indices),
                              static_cast<double>(n) / static_cast<double>(r)};
}

std::vector<std::vector<Index>> enumerate_index_sets(Index n, Index r) {
  std::vector<std::vector<Index>> sets;
  std::vector<Index> current(static_cast<std::size_t>(r));
  for (Index i = 0; i < r; ++i) current[static_cast<std::size_t>(i)] = i;
  while (true) {
    sets.push_back(current);
    Index pos = r - 1;
    while (pos >= 0 && current[static_cast<std::size_t>(pos)] == n - r + pos) --pos;
    if (pos < 0) break;
    ++current[static_cast<std::size_t>(pos)];
    for (Index j = pos + 1; j < r; ++j) {
      current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return sets;
}

double worst_ratio_over_coresets(Index n, Index d, Index r) {
  if (n > kEnumerationGuard) {
    throw precondition_error("enumeration size guard exceeded");
  }
  if (r < 1 || r >= n) throw precondition_error("need 1 <= r < n");

  double worst = std::numeric_limits<double>::infinity();
  for (const auto& set : enumerate_index_sets(n, r)) {
    const AgnosticHardInstance inst = hard_instance_for_coreset(n, d, set);

    // The sampled target vanishes, so the coreset solution is 0 for every
    // positive reweighting; solve with unit weights and assert the premise.
    CoresetOperator op;
    op.source_rows = n;
    for (Index i : set) op.picks.push_back({i, 1.0});
    if (apply(op, inst.b).lpNorm<Eigen::Infinity>() != 0.0) {
      throw numerical_error("hard target is nonzero on its own coreset");
    }
    const Vector x_tilde = solve_unconstrained(apply(op, inst.A), apply(op, inst.b));
    const double tilde_err = (inst.A * x_tilde - inst.b).squaredNorm();

    const Vector x_opt = inst.A.transpose() * inst.b;  // A has orthonormal columns
    const double full_err = (inst.A * x_opt - inst.b).squaredNorm();

    bool infinite = false;
    const double ratio = error_ratio(full_err, tilde_err, inst.b.squaredNorm(), &infinite);
    if (!infinite) worst = std::min(worst, ratio);
  }
  return worst;
}

CoresetDistribution uniform_coreset_distribution(Index n, Index r) {
  if (n > kEnumerationGuard) {
    throw precondition_error("enumeration size guard exceeded");
  }
  auto sets = enumerate_index_sets(n, r);
  const double p = 1.0 / static_cast<double>(sets.size());
  CoresetDistribution dist;
  dist.reserve(sets.size());
  for (auto& s : sets) dist.emplace_back(std::move(s), p);
  return dist;
}

HardTarget hard_target_for_sampler(Index n, Index r, Index ell,
                                   const CoresetDistribution& distribution) {
  if (n > kEnumerationGuard) {
    throw precondition_error("enumeration size guard exceeded");
  }
  if (ell < 1 || ell > n - r) {
    throw precondition_error("target size must satisfy 1 <= ell <= n - r");
  }
  if (distribution.empty()) throw precondition_error("empty coreset distribution");

  double total = 0.0;
  std::vector<std::pair<std::uint32_t, double>> masked;
  masked.reserve(distribution.size());
  for (const auto& [set, prob] : distribution) {
    if (static_cast<Index>(set.size()) != r) {
      throw precondition_error("distribution contains a set of the wrong size");
    }
    std::vector<Index> sorted = set;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() ||
        sorted.front() < 0 || sorted.back() >= n) {
      throw precondition_error("distribution contains an invalid index set");
    }
    if (prob < 0.0) throw precondition_error("negative coreset probability");
    total += prob;
    masked.emplace_back(to_mask(set), prob);
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw precondition_error("coreset probabilities must sum to 1");
  }

  const auto targets = enumerate_index_sets(n, ell);
  double best_hit = std::numeric_limits<double>::infinity();
  std::vector<Index> best_target;
  for (const auto& target : targets) {
    const std::uint32_t tmask = to_mask(target);
    double hit = 0.0;
    for (const auto& [cmask, prob] : masked) {
      if ((cmask & tmask) != 0) hit += prob;
    }
    if (hit < best_hit) {
      best_hit = hit;
      best_target = target;
    }
  }

  HardTarget out;
  out.target = best_target;
  out.b = Vector::Zero(n);
  const double value = 1.0 / std::sqrt(static_cast<double>(ell));
  for (Index i : best_target) out.b(i) = value;
  out.success_probability_lower_bound =
      static_cast<double>(binomial(static_cast<unsigned>(n - r), static_cast<unsigned>(ell))) /
      static_cast<double>(binomial(static_cast<unsigned>(n), static_cast<unsigned>(ell)));
  return out;
}

RegressionInstance two_point_instance() {
  Matrix A(2, 1);
  A << 1.0, -1.0;
  Vector b(2);
  b << 1.0, 1.0;
  return RegressionInstance(std::move(A), std::move(b));
}

}  // namespace richcore
