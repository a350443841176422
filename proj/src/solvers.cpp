#include "richcore/solvers.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "richcore/linalg.hpp"

namespace richcore {

ConstraintDomain ConstraintDomain::unconstrained() {
  return ConstraintDomain{DomainKind::unconstrained, nullptr};
}

ConstraintDomain ConstraintDomain::nonnegative() {
  return ConstraintDomain{DomainKind::nonnegative, nullptr};
}

ConstraintDomain ConstraintDomain::custom(
    std::function<Vector(const Matrix&, const Vector&)> fn) {
  if (!fn) throw precondition_error("custom domain needs a minimizer");
  return ConstraintDomain{DomainKind::custom, std::move(fn)};
}

Vector ConstraintDomain::solve(const Matrix& M, const Vector& v) const {
  switch (kind) {
    case DomainKind::unconstrained: return solve_unconstrained(M, v);
    case DomainKind::nonnegative: return solve_nnls(M, v);
    case DomainKind::custom: return minimize(M, v);
  }
  throw precondition_error("unknown domain kind");
}

Matrix solve_unconstrained(const Matrix& A, const Matrix& rhs) {
  if (rhs.rows() != A.rows()) {
    throw precondition_error("right-hand side rows do not match data rows");
  }
  return pseudoinverse(A) * rhs;
}

Vector solve_unconstrained(const Matrix& A, const Vector& rhs) {
  return Vector(solve_unconstrained(A, Matrix(rhs)).col(0));
}

namespace {

Vector nnls_gradient(const Matrix& A, const Vector& b, const Vector& x) {
  return 2.0 * (A.transpose() * (A * x - b));
}

// Worst first-order violation, relative to the gradient scale.
double kkt_violation(const Vector& x, const Vector& g) {
  double worst = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double v = x(i) > 0.0 ? std::abs(g(i)) : std::max(-g(i), 0.0);
    worst = std::max(worst, v);
  }
  return worst;
}

// Solve the unconstrained problem restricted to a candidate support, shrink
// the support while the restricted solution leaves the orthant, then check
// first-order optimality on the result.
bool active_set_refine(const Matrix& A, const Vector& b, double scale, Vector& x) {
  const Index d = A.cols();
  Vector g = nnls_gradient(A, b, x);
  std::vector<bool> free(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) {
    free[static_cast<std::size_t>(i)] = x(i) > 0.0 || g(i) < 0.0;
  }
  for (Index round = 0; round <= 2 * d + 2; ++round) {
    std::vector<Index> support;
    for (Index i = 0; i < d; ++i) {
      if (free[static_cast<std::size_t>(i)]) support.push_back(i);
    }
    Vector trial = Vector::Zero(d);
    if (!support.empty()) {
      Matrix sub(A.rows(), static_cast<Index>(support.size()));
      for (std::size_t j = 0; j < support.size(); ++j) sub.col(static_cast<Index>(j)) = A.col(support[j]);
      const Vector xs = pseudoinverse(sub) * b;
      Index most_negative = -1;
      double lowest = -1e-12;
      for (std::size_t j = 0; j < support.size(); ++j) {
        if (xs(static_cast<Index>(j)) < lowest) {
          lowest = xs(static_cast<Index>(j));
          most_negative = support[j];
        }
      }
      if (most_negative >= 0) {
        free[static_cast<std::size_t>(most_negative)] = false;
        continue;
      }
      for (std::size_t j = 0; j < support.size(); ++j) {
        trial(support[j]) = std::max(xs(static_cast<Index>(j)), 0.0);
      }
    }
    g = nnls_gradient(A, b, trial);
    if (kkt_violation(trial, g) <= 1e-10 * scale + 1e-12) {
      x = trial;
      return true;
    }
    // Release the most promising bound coordinate and try again.
    Index entering = -1;
    double steepest = -1e-12 * scale;
    for (Index i = 0; i < d; ++i) {
      if (!free[static_cast<std::size_t>(i)] && g(i) < steepest) {
        steepest = g(i);
        entering = i;
      }
    }
    if (entering < 0) {
      x = trial;
      return kkt_violation(trial, g) <= 1e-8 * scale + 1e-12;
    }
    free[static_cast<std::size_t>(entering)] = true;
  }
  return false;
}

}  // namespace

bool nnls_kkt_satisfied(const Matrix& A, const Vector& b, const Vector& x,
                        double rel_tol) {
  if (x.minCoeff() < 0.0) return false;
  const Vector g = nnls_gradient(A, b, x);
  const double scale = std::max(g.lpNorm<Eigen::Infinity>(),
                                2.0 * (A.transpose() * b).lpNorm<Eigen::Infinity>());
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) > 0.0) {
      if (std::abs(g(i)) > rel_tol * scale + 1e-9) return false;
    } else {
      if (g(i) < -rel_tol * scale - 1e-9) return false;
    }
  }
  return true;
}

Vector solve_nnls(const Matrix& A, const Vector& b, const NnlsOptions& opts) {
  if (b.size() != A.rows()) {
    throw precondition_error("target length does not match data rows");
  }
  const Index d = A.cols();
  if (A.lpNorm<Eigen::Infinity>() == 0.0) return Vector::Zero(d);

  const double lipschitz = 2.0 * std::pow(spectral_norm(A), 2);
  const double scale =
      std::max(2.0 * (A.transpose() * b).lpNorm<Eigen::Infinity>(), 1e-30);

  Vector x = Vector::Zero(d);
  Vector g = nnls_gradient(A, b, x);
  double step = 1.0 / lipschitz;
  bool use_first_rule = true;

  for (Index iter = 0; iter < opts.max_iterations; ++iter) {
    if (kkt_violation(x, g) <= opts.tolerance * scale) break;
    if (iter % 250 == 249 && active_set_refine(A, b, scale, x)) {
      return x;
    }
    const Vector x_next = (x - step * g).cwiseMax(0.0);
    const Vector g_next = nnls_gradient(A, b, x_next);
    const Vector s = x_next - x;
    const Vector y = g_next - g;
    const double sy = s.dot(y);
    if (s.lpNorm<Eigen::Infinity>() == 0.0) break;  // stationary under projection
    if (sy > 0.0) {
      step = use_first_rule ? s.squaredNorm() / sy : sy / y.squaredNorm();
      use_first_rule = !use_first_rule;
      step = std::min(std::max(step, 1e-8 / lipschitz), 1e8 / lipschitz);
    } else {
      step = 1.0 / lipschitz;
    }
    x = x_next;
    g = g_next;
  }

  if (active_set_refine(A, b, scale, x)) return x;
  if (nnls_kkt_satisfied(A, b, x, 1e-6)) return x;

  std::ostringstream msg;
  msg << "nonnegative least squares did not converge: first-order violation "
      << kkt_violation(x, nnls_gradient(A, b, x)) << " vs scale " << scale
      << ", residual " << (A * x - b).norm();
  throw solver_error(msg.str());
}

Vector solve_on_coreset(const CoresetOperator& op, const RegressionInstance& inst,
                        const ConstraintDomain& domain) {
  const Matrix M = apply(op, inst.A);
  const Vector v = apply(op, inst.b);
  return domain.solve(M, v);
}

double error_ratio(double optimal_sq, double candidate_sq, double scale_sq,
                   bool* infinite) {
  if (infinite) *infinite = false;
  const double floor = 1e-14 * scale_sq;
  if (optimal_sq <= floor) {
    if (candidate_sq <= floor) return 1.0;
    if (infinite) *infinite = true;
    return std::numeric_limits<double>::infinity();
  }
  return candidate_sq / optimal_sq;
}

SolveReport evaluate(const RegressionInstance& inst, const CoresetOperator& op,
                     const Vector& x_opt, const Vector& x_tilde,
                     double predicted_bound) {
  SolveReport report;
  report.x_opt = x_opt;
  report.x_tilde = x_tilde;
  report.full_error_sq = (inst.A * x_opt - inst.b).squaredNorm();
  report.coreset_error_sq =
      (apply(op, inst.A) * x_tilde - apply(op, inst.b)).squaredNorm();
  const double tilde_full = (inst.A * x_tilde - inst.b).squaredNorm();
  report.achieved_ratio = error_ratio(report.full_error_sq, tilde_full,
                                      inst.b.squaredNorm(), &report.infinite_ratio);
  report.predicted_bound = predicted_bound;
  return report;
}

MultiSolveReport evaluate(const MultiResponseInstance& inst, const CoresetOperator& op,
                          const Matrix& X_opt, const Matrix& X_tilde,
                          double predicted_bound, ErrorNorm norm) {
  const auto norm_sq = [norm](const Matrix& M) {
    if (norm == ErrorNorm::frobenius) return M.squaredNorm();
    const double s = spectral_norm(M);
    return s * s;
  };
  MultiSolveReport report;
  report.X_opt = X_opt;
  report.X_tilde = X_tilde;
  report.full_error_sq = norm_sq(inst.A * X_opt - inst.B);
  report.coreset_error_sq = norm_sq(apply(op, inst.A) * X_tilde - apply(op, inst.B));
  const double tilde_full = norm_sq(inst.A * X_tilde - inst.B);
  report.achieved_ratio = error_ratio(report.full_error_sq, tilde_full,
                                      norm_sq(inst.B), &report.infinite_ratio);
  report.predicted_bound = predicted_bound;
  return report;
}

}  // namespace richcore
