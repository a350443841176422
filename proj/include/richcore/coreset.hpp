#pragma once

#include <string>
#include <utility>

#include "richcore/sparsify.hpp"

namespace richcore {

/// Simple regression problem min_{x in D} ||A x - b||^2 with the numerical
/// rank of A recorded at construction.
struct RegressionInstance {
  Matrix A;
  Vector b;
  Index k;

  RegressionInstance(Matrix A_in, Vector b_in);
};

/// Multiple-response problem min_X ||A X - B||. B holds one target per column.
struct MultiResponseInstance {
  Matrix A;
  Matrix B;
  Index k;

  MultiResponseInstance(Matrix A_in, Matrix B_in);

  Index omega() const { return B.cols(); }
};

enum class CoresetMode {
  simple,
  multi_objective,
  arbitrary_constrained,
  multiple_spectral,
  multiple_frobenius,
  agnostic,
};

std::string to_string(CoresetMode mode);
CoresetMode coreset_mode_from_string(const std::string& name);

/// A constructed operator together with the multiplicative guarantee on the
/// squared error of the solution recovered from it.
struct CoresetBundle {
  CoresetOperator op;
  double predicted_bound;
  CoresetMode mode;
};

/// Position of a stacked row in the block-diagonal lifting: row q of the
/// lifted system touches data row (q mod n) and response column (q div n).
struct LiftedIndex {
  Index data_row;
  Index response_col;

  static LiftedIndex decode(Index q, Index n);
  Index encode(Index n) const;
};

/// Guarantee formulas, exposed separately so they can be checked at the
/// formula level (monotonicity in r, spot values).
double simple_coreset_bound(Index k, Index r);
double multiple_spectral_bound(Index k, Index omega, Index r);
double multiple_frobenius_bound(Index k, Index r);
double agnostic_coreset_bound(Index k, Index n, Index r);

/// Single-response construction: single-set selection on the left singular
/// basis of [A, b]. Requires r > k + 1.
CoresetBundle simple_coreset(const RegressionInstance& inst, Index r);

/// Reduces simultaneous fitting of all columns of B with one x to simple
/// regression against the column average.
CoresetBundle multi_objective_coreset(const MultiResponseInstance& inst, Index r);

/// Splits ||A [x,...,x] - B||_F^2 into omega ||A x - b_avg||^2 plus a spread
/// term independent of x. The two terms sum to the Frobenius objective.
std::pair<double, double> multi_objective_error_decomposition(
    const MultiResponseInstance& inst, const Vector& x);

/// Block-diagonal lifting of the multiple-response problem to a single
/// regression of size (n*omega) x (d*omega). Guarded against materializing
/// more than 10^7 entries.
std::pair<Matrix, Vector> lift_block_diagonal(const MultiResponseInstance& inst);

/// Coreset for arbitrarily constrained multiple-response regression via the
/// lifted problem; pick indices refer to lifted rows (see LiftedIndex).
CoresetBundle arbitrary_constrained_coreset(const MultiResponseInstance& inst, Index r);

/// Two-set construction controlling the sampled residual in spectral norm.
/// Requires k + 1 < r <= n.
CoresetBundle multiple_spectral_coreset(const MultiResponseInstance& inst, Index r);

/// Two-set construction controlling the sampled residual in Frobenius norm.
CoresetBundle multiple_frobenius_coreset(const MultiResponseInstance& inst, Index r);

/// Target-agnostic construction from A alone; the guarantee holds for every
/// response matrix in both norms. Requires k < r <= n.
CoresetBundle agnostic_coreset(const Matrix& A, Index r);

enum class ErrorNorm { spectral, frobenius };

/// Evaluates both sides of the generic coreset error bound
///   lhs = ||A X~ - B||^2,  rhs = ||A X* - B||^2 + ||(op U_A)^+ op(A X* - B)||^2
/// in the requested norm. Requires the sampled U_A to keep rank k.
std::pair<double, double> generic_bound_check(const MultiResponseInstance& inst,
                                              const CoresetOperator& op,
                                              ErrorNorm norm);

}  // namespace richcore
