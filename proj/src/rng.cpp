#include "richcore/rng.hpp"

#include <algorithm>
#include <cmath>

namespace richcore {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw precondition_error("below(0) is undefined");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double Rng::gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1;
  do {
    u1 = uniform01();
  } while (u1 <= 0.0);
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

std::vector<Index> Rng::sample_without_replacement(Index n, Index r) {
  if (r > n) throw precondition_error("cannot sample more indices than exist");
  // Partial Fisher-Yates over an explicit index pool.
  std::vector<Index> pool(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < r; ++i) {
    const auto j = i + static_cast<Index>(below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  std::vector<Index> out(pool.begin(), pool.begin() + r);
  std::sort(out.begin(), out.end());
  return out;
}

Matrix random_gaussian(Rng& rng, Index rows, Index cols) {
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) M(i, j) = rng.gaussian();
  return M;
}

Matrix random_orthonormal(Rng& rng, Index n, Index ell) {
  if (ell > n) throw precondition_error("orthonormal basis needs ell <= n");
  const Matrix G = random_gaussian(rng, n, ell);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ() * Matrix::Identity(n, ell);
  return Q;
}

}  // namespace richcore
