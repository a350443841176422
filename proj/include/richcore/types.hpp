#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace richcore {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Violated contract on the inputs of an operation (bad shapes, r too small,
/// non-orthonormal bases, size guards).
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative solver failed to reach its optimality tolerance.
class solver_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A deterministic selection reached a state the existence proof rules out;
/// indicates a floating-point fault, not a usage error.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws precondition_error if M contains NaN or Inf entries.
void require_finite(const Matrix& M, const std::string& name);

}  // namespace richcore
