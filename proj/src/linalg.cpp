#include "richcore/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace richcore {

void require_finite(const Matrix& M, const std::string& name) {
  if (!M.allFinite()) {
    throw precondition_error(name + " contains NaN or Inf entries");
  }
}

RankTolerance RankTolerance::for_shape(Index rows, Index cols) {
  const double eps = std::numeric_limits<double>::epsilon();
  return RankTolerance{eps * static_cast<double>(std::max(rows, cols))};
}

namespace {

// Jacobi is the most accurate dense SVD for small factors; fall back to the
// divide-and-conquer kernel once the matrix stops being small.
ThinSvd svd_impl(const Matrix& M, double rel_threshold) {
  Matrix U_full, V_full;
  Vector sv;
  if (std::max(M.rows(), M.cols()) <= 64) {
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    U_full = svd.matrixU();
    V_full = svd.matrixV();
    sv = svd.singularValues();
  } else {
    Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    U_full = svd.matrixU();
    V_full = svd.matrixV();
    sv = svd.singularValues();
  }

  const double cutoff = rel_threshold * sv(0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;

  ThinSvd out;
  out.U = U_full.leftCols(rank);
  out.sigma = sv.head(rank);
  out.V = V_full.leftCols(rank);
  out.rank = rank;
  return out;
}

}  // namespace

ThinSvd thin_svd(const Matrix& M, const RankTolerance& tol) {
  require_finite(M, "matrix");
  if (M.rows() < 1 || M.cols() < 1) {
    throw precondition_error("thin SVD requires a non-empty matrix");
  }
  if (tol.relative_threshold <= 0.0 || tol.relative_threshold >= 1.0) {
    throw precondition_error("rank tolerance must lie in (0, 1)");
  }
  if (M.lpNorm<Eigen::Infinity>() == 0.0) {
    throw precondition_error("zero matrix has no thin SVD");
  }
  return svd_impl(M, tol.relative_threshold);
}

ThinSvd thin_svd(const Matrix& M) {
  return thin_svd(M, RankTolerance::for_shape(M.rows(), M.cols()));
}

Index numerical_rank(const Matrix& M) {
  if (M.size() == 0 || M.lpNorm<Eigen::Infinity>() == 0.0) return 0;
  return thin_svd(M).rank;
}

Matrix pseudoinverse(const Matrix& M) {
  const ThinSvd svd = thin_svd(M);
  return svd.V * svd.sigma.cwiseInverse().asDiagonal() * svd.U.transpose();
}

Matrix orthonormal_complement(const Matrix& U) {
  require_finite(U, "basis");
  const Index n = U.rows();
  const Index rho = U.cols();
  if (rho < 1 || n < rho) {
    throw precondition_error("basis must be n x rho with 1 <= rho <= n");
  }
  const double defect =
      (U.transpose() * U - Matrix::Identity(rho, rho)).lpNorm<Eigen::Infinity>();
  if (defect > 1e-8) {
    throw precondition_error("basis columns are not orthonormal");
  }
  if (rho == n) return Matrix(n, 0);

  Eigen::HouseholderQR<Matrix> qr(U);
  Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
  return Q.rightCols(n - rho);
}

MatrixNorms norms(const Matrix& M) {
  require_finite(M, "matrix");
  if (M.lpNorm<Eigen::Infinity>() == 0.0) return {0.0, 0.0};
  double sigma_max = 0.0;
  if (std::max(M.rows(), M.cols()) <= 64) {
    sigma_max = Eigen::JacobiSVD<Matrix>(M).singularValues()(0);
  } else {
    sigma_max = Eigen::BDCSVD<Matrix>(M).singularValues()(0);
  }
  return {sigma_max, M.norm()};
}

double spectral_norm(const Matrix& M) { return norms(M).spectral; }

}  // namespace richcore
