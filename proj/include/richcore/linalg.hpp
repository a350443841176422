#pragma once

#include "richcore/types.hpp"

namespace richcore {

/// Relative cutoff separating numerical rank from floating-point noise.
/// Singular values sigma_i with sigma_i <= relative_threshold * sigma_max
/// are treated as zero.
struct RankTolerance {
  double relative_threshold;

  static RankTolerance for_shape(Index rows, Index cols);
};

/// Rank-revealing thin SVD: M = U * diag(sigma) * V^T with U (n x rank),
/// V (d x rank) orthonormal and sigma positive, non-increasing.
struct ThinSvd {
  Matrix U;
  Vector sigma;
  Matrix V;
  Index rank;
};

ThinSvd thin_svd(const Matrix& M, const RankTolerance& tol);
ThinSvd thin_svd(const Matrix& M);

/// Numerical rank at the default tolerance; 0 for an all-zero matrix.
Index numerical_rank(const Matrix& M);

/// Moore-Penrose pseudoinverse via the thin SVD.
Matrix pseudoinverse(const Matrix& M);

/// Orthonormal basis Q of the subspace perpendicular to the columns of U,
/// so that Q^T Q = I, U^T Q = 0 and U U^T + Q Q^T = I. U must have
/// orthonormal columns. Returns an n x 0 matrix when U is square.
Matrix orthonormal_complement(const Matrix& U);

struct MatrixNorms {
  double spectral;
  double frobenius;
};

MatrixNorms norms(const Matrix& M);

double spectral_norm(const Matrix& M);

}  // namespace richcore
