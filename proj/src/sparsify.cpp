#include "richcore/sparsify.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "richcore/linalg.hpp"

namespace richcore {

CoresetOperator CoresetOperator::identity(Index n) {
  CoresetOperator op;
  op.source_rows = n;
  op.picks.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) op.picks.push_back({i, 1.0});
  return op;
}

void CoresetOperator::validate() const {
  if (picks.empty()) throw precondition_error("operator has no picks");
  if (source_rows < 1) throw precondition_error("operator has no source rows");
  for (const Pick& p : picks) {
    if (p.row < 0 || p.row >= source_rows) {
      throw precondition_error("pick index out of range");
    }
    if (!(p.scale > 0.0) || !std::isfinite(p.scale)) {
      throw precondition_error("pick scale must be positive and finite");
    }
  }
}

Matrix apply(const CoresetOperator& op, const Matrix& M) {
  op.validate();
  if (M.rows() != op.source_rows) {
    throw precondition_error("operator row count does not match matrix");
  }
  Matrix out(op.size(), M.cols());
  for (Index j = 0; j < op.size(); ++j) {
    const Pick& p = op.picks[static_cast<std::size_t>(j)];
    out.row(j) = p.scale * M.row(p.row);
  }
  return out;
}

Vector apply(const CoresetOperator& op, const Vector& v) {
  Matrix column = apply(op, Matrix(v));
  return Vector(column.col(0));
}

double single_set_lower_factor(Index ell, Index r) {
  return 1.0 - std::sqrt(static_cast<double>(ell) / static_cast<double>(r));
}

double single_set_upper_factor(Index ell, Index r) {
  return 1.0 + std::sqrt(static_cast<double>(ell) / static_cast<double>(r));
}

namespace {

// Trace of the resolvent on either side of a barrier.
double potential_above(const Vector& eigs, double barrier) {
  double sum = 0.0;
  for (Index i = 0; i < eigs.size(); ++i) sum += 1.0 / (eigs(i) - barrier);
  return sum;
}

double potential_below(const Vector& eigs, double barrier) {
  double sum = 0.0;
  for (Index i = 0; i < eigs.size(); ++i) sum += 1.0 / (barrier - eigs(i));
  return sum;
}

// Quadratic forms row_i^T P row_i for every row of R at once.
Vector rowwise_quadratic(const Matrix& R, const Matrix& P) {
  return (R * P).cwiseProduct(R).rowwise().sum();
}

// Greedy barrier-potential selection. The lower barrier chases the spectrum
// of X = sum_t w_t v_t v_t^T from below; the upper side is either a second
// resolvent potential on W = sum_t w_t a_t a_t^T (spectral control of the
// second set), a fixed per-row trace budget (Frobenius control), or absent.
//
// Constants: with beta = sqrt(k/r) the lower barrier starts at -sqrt(rk) and
// advances by 1 per step, so after r steps lambda_min(X) > r(1 - beta).
// The upper barrier starts at sqrt(qr)(1+gamma)/(1-beta) and advances by
// (1+gamma)/(1-beta), ending at r(1+gamma)^2/(1-beta). Scaling all weights by
// (1-beta)/r lands the two spectra in [(1-beta)^2, ...] and [..., (1+gamma)^2].
CoresetOperator barrier_select(const Matrix& V, const Matrix& upper_rows,
                               const Vector& trace_budget, Index r) {
  const Index n = V.rows();
  const Index k = V.cols();
  const double beta = std::sqrt(static_cast<double>(k) / static_cast<double>(r));

  const bool has_spectral_upper = upper_rows.size() > 0;
  const bool has_trace_upper = trace_budget.size() > 0;
  const Index q = has_spectral_upper ? upper_rows.cols() : 0;
  const double gamma =
      has_spectral_upper ? std::sqrt(static_cast<double>(q) / static_cast<double>(r)) : 0.0;
  const double upper_shift = has_spectral_upper ? (1.0 + gamma) / (1.0 - beta) : 0.0;

  Matrix X = Matrix::Zero(k, k);
  Matrix W = has_spectral_upper ? Matrix::Zero(q, q) : Matrix();
  double lower_barrier = -std::sqrt(static_cast<double>(r) * static_cast<double>(k));
  double upper_barrier = has_spectral_upper
                             ? std::sqrt(static_cast<double>(q) * static_cast<double>(r)) *
                                   (1.0 + gamma) / (1.0 - beta)
                             : 0.0;

  CoresetOperator op;
  op.source_rows = n;
  op.picks.reserve(static_cast<std::size_t>(r));

  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  for (Index step = 0; step < r; ++step) {
    const double shifted_lower = lower_barrier + 1.0;
    eig.compute(X);
    const Vector lam = eig.eigenvalues();
    if (lam(0) - shifted_lower <= 0.0) {
      throw numerical_error("row selection lost the lower spectral barrier");
    }
    const double dphi =
        potential_above(lam, shifted_lower) - potential_above(lam, lower_barrier);
    const Matrix basis = eig.eigenvectors();
    const Vector inv1 = (lam.array() - shifted_lower).inverse().matrix();
    const Matrix res1 = basis * inv1.asDiagonal() * basis.transpose();
    const Matrix res2 = basis * inv1.cwiseAbs2().asDiagonal() * basis.transpose();
    const Vector lower_gain =
        rowwise_quadratic(V, res2) / dphi - rowwise_quadratic(V, res1);

    Vector upper_cost = Vector::Zero(n);
    double shifted_upper = 0.0;
    if (has_spectral_upper) {
      shifted_upper = upper_barrier + upper_shift;
      eig.compute(W);
      const Vector mu = eig.eigenvalues();
      if (shifted_upper - mu(mu.size() - 1) <= 0.0) {
        throw numerical_error("row selection lost the upper spectral barrier");
      }
      const double dpsi =
          potential_below(mu, upper_barrier) - potential_below(mu, shifted_upper);
      const Matrix ubasis = eig.eigenvectors();
      const Vector uinv1 = (shifted_upper - mu.array()).inverse().matrix();
      const Matrix ures1 = ubasis * uinv1.asDiagonal() * ubasis.transpose();
      const Matrix ures2 = ubasis * uinv1.cwiseAbs2().asDiagonal() * ubasis.transpose();
      upper_cost =
          rowwise_quadratic(upper_rows, ures2) / dpsi + rowwise_quadratic(upper_rows, ures1);
    } else if (has_trace_upper) {
      upper_cost = trace_budget;
    }

    // Admissible rows satisfy cost <= gain with a formable positive weight.
    // Take the largest slack; ties resolve to the smallest index.
    Index best = -1;
    double best_slack = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      const double slack = lower_gain(i) - upper_cost(i);
      if (slack >= 0.0 && lower_gain(i) + upper_cost(i) > 0.0 && slack > best_slack) {
        best = i;
        best_slack = slack;
      }
    }
    if (best < 0) {
      throw numerical_error(
          "no admissible row at selection step " + std::to_string(step) +
          "; the potentials guarantee one exists, so this is a numerical fault");
    }

    const double weight = 2.0 / (upper_cost(best) + lower_gain(best));
    X.noalias() += weight * V.row(best).transpose() * V.row(best);
    if (has_spectral_upper) {
      W.noalias() += weight * upper_rows.row(best).transpose() * upper_rows.row(best);
    }
    op.picks.push_back({best, weight});
    lower_barrier = shifted_lower;
    upper_barrier = shifted_upper;
  }

  // Weights multiply outer products; operator entries multiply rows.
  const double normalization = (1.0 - beta) / static_cast<double>(r);
  for (Pick& p : op.picks) p.scale = std::sqrt(normalization * p.scale);
  return op;
}

void check_row_basis(const Matrix& V, Index r) {
  require_finite(V, "row basis");
  const Index k = V.cols();
  if (k < 1 || V.rows() < 1) throw precondition_error("row basis is empty");
  const double defect =
      (V.transpose() * V - Matrix::Identity(k, k)).lpNorm<Eigen::Infinity>();
  if (defect > 1e-8) {
    throw precondition_error("row basis columns are not orthonormal");
  }
  if (r <= k) {
    throw precondition_error("coreset size must exceed subspace dimension");
  }
}

}  // namespace

CoresetOperator single_set_spectral(const Matrix& U, Index r) {
  check_row_basis(U, r);
  return barrier_select(U, U, Vector(), r);
}

CoresetOperator dual_set_spectral(const DualSetInput& input) {
  check_row_basis(input.V_rows, input.r);
  require_finite(input.Psi, "Psi");
  if (input.Psi.size() > 0 && input.Psi.rows() != input.V_rows.rows()) {
    throw precondition_error("Psi row count does not match the row basis");
  }
  if (input.Psi.size() == 0 || input.Psi.lpNorm<Eigen::Infinity>() == 0.0) {
    return barrier_select(input.V_rows, Matrix(), Vector(), input.r);
  }
  // Work in the right singular frame of Psi so the potential sees exactly
  // rank(Psi) directions, normalized to sigma_max = 1.
  const ThinSvd psi = thin_svd(input.Psi);
  const Matrix rows = psi.U * (psi.sigma / psi.sigma(0)).asDiagonal();
  return barrier_select(input.V_rows, rows, Vector(), input.r);
}

CoresetOperator dual_set_spectral_frobenius(const DualSetInput& input) {
  check_row_basis(input.V_rows, input.r);
  require_finite(input.Psi, "Psi");
  if (input.Psi.size() > 0 && input.Psi.rows() != input.V_rows.rows()) {
    throw precondition_error("Psi row count does not match the row basis");
  }
  const double total = input.Psi.size() > 0 ? input.Psi.squaredNorm() : 0.0;
  if (total == 0.0) {
    return barrier_select(input.V_rows, Matrix(), Vector(), input.r);
  }
  const double beta = std::sqrt(static_cast<double>(input.V_rows.cols()) /
                                static_cast<double>(input.r));
  const Vector budget = (1.0 - beta) * input.Psi.rowwise().squaredNorm() / total;
  return barrier_select(input.V_rows, Matrix(), budget, input.r);
}

}  // namespace richcore
