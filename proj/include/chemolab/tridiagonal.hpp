#pragma once

#include <Eigen/Dense>

#include "chemolab/error.hpp"

namespace chemolab {

/// Thomas elimination for lower(i) x(i-1) + diag(i) x(i) + upper(i) x(i+1) = rhs(i).
/// lower(0) and upper(N-1) are ignored. No pivoting: intended for
/// diagonally dominant systems.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> solve_tridiagonal(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& lower, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& diag,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& upper, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& rhs) {
  const Eigen::Index n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw Error(ErrorCode::LengthMismatch, "tridiagonal bands disagree in length");

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c_star(n);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x(n);
  if (n == 0) return x;

  Scalar pivot = diag(0);
  if (pivot == Scalar(0)) throw Error(ErrorCode::SingularSystem, "zero pivot at row 0");
  c_star(0) = upper(0) / pivot;
  x(0) = rhs(0) / pivot;
  for (Eigen::Index i = 1; i < n; ++i) {
    pivot = diag(i) - lower(i) * c_star(i - 1);
    if (pivot == Scalar(0)) throw Error(ErrorCode::SingularSystem, "zero pivot at row " + std::to_string(i));
    c_star(i) = upper(i) / pivot;
    x(i) = (rhs(i) - lower(i) * x(i - 1)) / pivot;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) x(i) -= c_star(i) * x(i + 1);
  return x;
}

}  // namespace chemolab
