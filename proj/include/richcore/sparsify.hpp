#pragma once

#include <vector>

#include "richcore/types.hpp"

namespace richcore {

/// One selected row together with the positive factor applied to it.
struct Pick {
  Index row;
  double scale;
};

/// Row-sampling-and-rescaling operator. Applying it to an n-row matrix
/// stacks one rescaled source row per pick; indices may repeat.
struct CoresetOperator {
  std::vector<Pick> picks;
  Index source_rows = 0;

  Index size() const { return static_cast<Index>(picks.size()); }

  /// Operator selecting every row once with unit weight.
  static CoresetOperator identity(Index n);

  /// Validates index range, positivity and finiteness of the scales.
  void validate() const;
};

Matrix apply(const CoresetOperator& op, const Matrix& M);
Vector apply(const CoresetOperator& op, const Vector& v);

/// Endpoints of the singular-value interval guaranteed by the single-set
/// selection: [1 - sqrt(ell/r), 1 + sqrt(ell/r)].
double single_set_lower_factor(Index ell, Index r);
double single_set_upper_factor(Index ell, Index r);

/// Deterministically selects r weighted rows of an orthonormal U (n x ell,
/// r > ell) so that every singular value of the sampled matrix lies in
/// [1 - sqrt(ell/r), 1 + sqrt(ell/r)].
CoresetOperator single_set_spectral(const Matrix& U, Index r);

/// Inputs of the two-set selections: V_rows has orthonormal columns (its rows
/// sum to the identity as outer products), Psi is the matrix whose image under
/// the operator must stay controlled, and r > cols(V_rows) is the number of
/// picks.
struct DualSetInput {
  Matrix V_rows;
  Matrix Psi;
  Index r;
};

/// Selects r weighted rows such that the sampled V_rows keeps full rank with
/// sigma_min > 1 - sqrt(k/r), while the sampled Psi obeys the spectral bound
/// ||op(Psi)||_2 < (1 + sqrt(rank(Psi)/r)) ||Psi||_2.
CoresetOperator dual_set_spectral(const DualSetInput& input);

/// Same lower-side guarantee, with the Frobenius bound
/// ||op(Psi)||_F <= ||Psi||_F on the second set.
CoresetOperator dual_set_spectral_frobenius(const DualSetInput& input);

}  // namespace richcore
