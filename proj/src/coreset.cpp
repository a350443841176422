#include "richcore/coreset.hpp"

#include <cmath>

#include "richcore/linalg.hpp"

namespace richcore {

namespace {

constexpr double kLiftedEntryGuard = 1e7;

Matrix concat_target(const Matrix& A, const Vector& b) {
  Matrix Y(A.rows(), A.cols() + 1);
  Y.leftCols(A.cols()) = A;
  Y.col(A.cols()) = b;
  return Y;
}

double norm_sq(const Matrix& M, ErrorNorm norm) {
  if (norm == ErrorNorm::frobenius) return M.squaredNorm();
  const double s = spectral_norm(M);
  return s * s;
}

}  // namespace

RegressionInstance::RegressionInstance(Matrix A_in, Vector b_in)
    : A(std::move(A_in)), b(std::move(b_in)) {
  require_finite(A, "A");
  require_finite(Matrix(b), "b");
  if (b.size() != A.rows()) {
    throw precondition_error("target length does not match data rows");
  }
  k = thin_svd(A).rank;
}

MultiResponseInstance::MultiResponseInstance(Matrix A_in, Matrix B_in)
    : A(std::move(A_in)), B(std::move(B_in)) {
  require_finite(A, "A");
  require_finite(B, "B");
  if (B.rows() != A.rows()) {
    throw precondition_error("response rows do not match data rows");
  }
  if (B.cols() < 1) throw precondition_error("response matrix has no columns");
  k = thin_svd(A).rank;
}

std::string to_string(CoresetMode mode) {
  switch (mode) {
    case CoresetMode::simple: return "simple";
    case CoresetMode::multi_objective: return "multi_objective";
    case CoresetMode::arbitrary_constrained: return "arbitrary_constrained";
    case CoresetMode::multiple_spectral: return "multiple_spectral";
    case CoresetMode::multiple_frobenius: return "multiple_frobenius";
    case CoresetMode::agnostic: return "agnostic";
  }
  return "unknown";
}

CoresetMode coreset_mode_from_string(const std::string& name) {
  for (CoresetMode mode :
       {CoresetMode::simple, CoresetMode::multi_objective, CoresetMode::arbitrary_constrained,
        CoresetMode::multiple_spectral, CoresetMode::multiple_frobenius, CoresetMode::agnostic}) {
    if (to_string(mode) == name) return mode;
  }
  throw precondition_error("unknown coreset mode: " + name);
}

LiftedIndex LiftedIndex::decode(Index q, Index n) {
  if (q < 0 || n < 1) throw precondition_error("invalid lifted index");
  return LiftedIndex{q % n, q / n};
}

Index LiftedIndex::encode(Index n) const { return response_col * n + data_row; }

double simple_coreset_bound(Index k, Index r) {
  const double rr = static_cast<double>(r);
  const double kk = static_cast<double>(k) + 1.0;
  const double cross = 2.0 * std::sqrt(rr * kk);
  const double denom = rr + kk - cross;
  if (r <= k + 1 || denom <= 0.0) {
    throw precondition_error("coreset size must exceed rank(A) + 1");
  }
  return (rr + kk + cross) / denom;
}

double multiple_spectral_bound(Index k, Index omega, Index r) {
  const double rr = static_cast<double>(r);
  const double num = 1.0 + std::sqrt(static_cast<double>(omega) / rr);
  const double den = 1.0 - std::sqrt(static_cast<double>(k) / rr);
  return 1.0 + (num / den) * (num / den);
}

double multiple_frobenius_bound(Index k, Index r) {
  const double den = 1.0 - std::sqrt(static_cast<double>(k) / static_cast<double>(r));
  return 1.0 + 1.0 / (den * den);
}

double agnostic_coreset_bound(Index k, Index n, Index r) {
  return multiple_spectral_bound(k, n, r);
}

namespace {

CoresetBundle simple_core(const Matrix& A, const Vector& b, Index k, Index r,
                          CoresetMode mode) {
  const double bound = simple_coreset_bound(k, r);  // also validates r
  const ThinSvd joint = thin_svd(concat_target(A, b));
  CoresetBundle bundle;
  bundle.op = single_set_spectral(joint.U, r);
  bundle.predicted_bound = bound;
  bundle.mode = mode;
  return bundle;
}

}  // namespace

CoresetBundle simple_coreset(const RegressionInstance& inst, Index r) {
  return simple_core(inst.A, inst.b, inst.k, r, CoresetMode::simple);
}

CoresetBundle multi_objective_coreset(const MultiResponseInstance& inst, Index r) {
  const Vector b_avg = inst.B.rowwise().mean();
  return simple_core(inst.A, b_avg, inst.k, r, CoresetMode::multi_objective);
}

std::pair<double, double> multi_objective_error_decomposition(
    const MultiResponseInstance& inst, const Vector& x) {
  if (x.size() != inst.A.cols()) {
    throw precondition_error("solution length does not match data columns");
  }
  const Index omega = inst.omega();
  const Vector b_avg = inst.B.rowwise().mean();
  const double fit = static_cast<double>(omega) * (inst.A * x - b_avg).squaredNorm();
  double spread = 0.0;
  for (Index j = 0; j < omega; ++j) spread += (b_avg - inst.B.col(j)).squaredNorm();
  return {fit, spread};
}

std::pair<Matrix, Vector> lift_block_diagonal(const MultiResponseInstance& inst) {
  const Index n = inst.A.rows();
  const Index d = inst.A.cols();
  const Index omega = inst.omega();
  const double entries = static_cast<double>(n) * static_cast<double>(omega) *
                         static_cast<double>(d) * static_cast<double>(omega);
  if (entries > kLiftedEntryGuard) {
    throw precondition_error("lifted problem too large");
  }
  Matrix A_hat = Matrix::Zero(n * omega, d * omega);
  Vector b_hat(n * omega);
  for (Index j = 0; j < omega; ++j) {
    A_hat.block(j * n, j * d, n, d) = inst.A;
    b_hat.segment(j * n, n) = inst.B.col(j);
  }
  return {std::move(A_hat), std::move(b_hat)};
}

CoresetBundle arbitrary_constrained_coreset(const MultiResponseInstance& inst, Index r) {
  auto [A_hat, b_hat] = lift_block_diagonal(inst);
  const RegressionInstance lifted(std::move(A_hat), std::move(b_hat));
  CoresetBundle bundle = simple_coreset(lifted, r);
  bundle.mode = CoresetMode::arbitrary_constrained;
  return bundle;
}

namespace {

CoresetBundle two_set_core(const MultiResponseInstance& inst, Index r, bool frobenius) {
  const Index n = inst.A.rows();
  if (r <= inst.k + 1 || r > n) {
    throw precondition_error("coreset size must satisfy rank(A) + 1 < r <= n");
  }
  const ThinSvd svd = thin_svd(inst.A);
  const Matrix residual = svd.U * (svd.U.transpose() * inst.B) - inst.B;
  CoresetBundle bundle;
  if (frobenius) {
    bundle.op = dual_set_spectral_frobenius({svd.U, residual, r});
    bundle.predicted_bound = multiple_frobenius_bound(inst.k, r);
    bundle.mode = CoresetMode::multiple_frobenius;
  } else {
    bundle.op = dual_set_spectral({svd.U, residual, r});
    bundle.predicted_bound = multiple_spectral_bound(inst.k, inst.omega(), r);
    bundle.mode = CoresetMode::multiple_spectral;
  }
  return bundle;
}

}  // namespace

CoresetBundle multiple_spectral_coreset(const MultiResponseInstance& inst, Index r) {
  return two_set_core(inst, r, false);
}

CoresetBundle multiple_frobenius_coreset(const MultiResponseInstance& inst, Index r) {
  return two_set_core(inst, r, true);
}

CoresetBundle agnostic_coreset(const Matrix& A, Index r) {
  require_finite(A, "A");
  const Index n = A.rows();
  const ThinSvd svd = thin_svd(A);
  if (r <= svd.rank || r > n) {
    throw precondition_error("coreset size must satisfy rank(A) < r <= n");
  }
  CoresetBundle bundle;
  bundle.op = dual_set_spectral({svd.U, Matrix::Identity(n, n), r});
  bundle.predicted_bound = agnostic_coreset_bound(svd.rank, n, r);
  bundle.mode = CoresetMode::agnostic;
  return bundle;
}

std::pair<double, double> generic_bound_check(const MultiResponseInstance& inst,
                                              const CoresetOperator& op,
                                              ErrorNorm norm) {
  const ThinSvd svd = thin_svd(inst.A);
  const Matrix sampled_basis = apply(op, svd.U);
  if (numerical_rank(sampled_basis) != inst.k) {
    throw precondition_error("sampled left singular basis lost rank");
  }
  const Matrix X_opt = pseudoinverse(inst.A) * inst.B;
  const Matrix residual = inst.A * X_opt - inst.B;
  const Matrix X_tilde = pseudoinverse(apply(op, inst.A)) * apply(op, inst.B);
  const double lhs = norm_sq(inst.A * X_tilde - inst.B, norm);
  const double rhs = norm_sq(residual, norm) +
                     norm_sq(pseudoinverse(sampled_basis) * apply(op, residual), norm);
  return {lhs, rhs};
}

}  // namespace richcore
