#pragma once

#include <functional>

#include "richcore/coreset.hpp"

namespace richcore {

enum class DomainKind { unconstrained, nonnegative, custom };

/// Feasible set of the regression. The set is fixed: the same domain is used
/// for the full and the coreset solves. A custom domain supplies a global
/// minimizer of ||M x - v||^2 over the set.
struct ConstraintDomain {
  DomainKind kind = DomainKind::unconstrained;
  std::function<Vector(const Matrix&, const Vector&)> minimize;

  static ConstraintDomain unconstrained();
  static ConstraintDomain nonnegative();
  static ConstraintDomain custom(std::function<Vector(const Matrix&, const Vector&)> fn);

  Vector solve(const Matrix& M, const Vector& v) const;
};

/// Minimum-norm least-squares solution A^+ rhs (rhs may have many columns).
Matrix solve_unconstrained(const Matrix& A, const Matrix& rhs);
Vector solve_unconstrained(const Matrix& A, const Vector& rhs);

struct NnlsOptions {
  Index max_iterations = 100000;
  double tolerance = 1e-9;  // relative first-order optimality target
};

/// Nonnegative least squares min_{x >= 0} ||A x - b||^2 by projected
/// gradient with Barzilai-Borwein steps, polished by active-set refinement.
Vector solve_nnls(const Matrix& A, const Vector& b, const NnlsOptions& opts = {});

/// First-order optimality check at relative tolerance rel_tol: entries at the
/// boundary need a nonnegative gradient, free entries a vanishing one.
bool nnls_kkt_satisfied(const Matrix& A, const Vector& b, const Vector& x,
                        double rel_tol);

/// Minimizer over the domain of the weighted coreset objective
/// ||op(A) x - op(b)||^2.
Vector solve_on_coreset(const CoresetOperator& op, const RegressionInstance& inst,
                        const ConstraintDomain& domain);

/// Ratio of squared errors with the degenerate-optimum convention: when the
/// optimal error is below 1e-14 * scale_sq the ratio is 1 if the candidate
/// error also is, +infinity otherwise (flagged through *infinite).
double error_ratio(double optimal_sq, double candidate_sq, double scale_sq,
                   bool* infinite = nullptr);

struct SolveReport {
  Vector x_opt;
  Vector x_tilde;
  double full_error_sq = 0.0;     // ||A x_opt - b||^2
  double coreset_error_sq = 0.0;  // ||op(A) x_tilde - op(b)||^2
  double achieved_ratio = 1.0;    // ||A x_tilde - b||^2 / full_error_sq
  double predicted_bound = 1.0;
  bool infinite_ratio = false;
};

SolveReport evaluate(const RegressionInstance& inst, const CoresetOperator& op,
                     const Vector& x_opt, const Vector& x_tilde,
                     double predicted_bound);

struct MultiSolveReport {
  Matrix X_opt;
  Matrix X_tilde;
  double full_error_sq = 0.0;
  double coreset_error_sq = 0.0;
  double achieved_ratio = 1.0;
  double predicted_bound = 1.0;
  bool infinite_ratio = false;
};

MultiSolveReport evaluate(const MultiResponseInstance& inst, const CoresetOperator& op,
                          const Matrix& X_opt, const Matrix& X_tilde,
                          double predicted_bound, ErrorNorm norm);

}  // namespace richcore
