#pragma once

#include <Eigen/Dense>

#include "chemolab/grid.hpp"
#include "chemolab/tridiagonal.hpp"

namespace chemolab {

/// 0 = lap z + load_coeff * u - absorption * z on B_R(0) with zero normal
/// derivative on the boundary; for v use (alpha, beta), for w (gamma, delta).
template <typename Scalar>
struct HelmholtzProblem {
  const RadialGrid<Scalar>& grid;
  Scalar absorption;
  Scalar load_coeff;
  const Field<Scalar>& source;
};

/// Finite-volume solve of (1/r^{n-1}) (r^{n-1} z_r)_r - absorption z = -load_coeff u.
///
/// Row i balances the face fluxes k_{i+1/2} (z_{i+1} - z_i) - k_{i-1/2} (z_i - z_{i-1})
/// with k = r_face^{n-1} / dr, against w_i (absorption z_i - load_coeff u_i).
/// The faces at r = 0 and r = R carry zero flux. The system is a symmetric
/// M-matrix, so u >= 0 gives z >= 0 and summing all rows gives
/// absorption * sum(w z) = load_coeff * sum(w u).
template <typename Scalar>
Field<Scalar> solve_helmholtz(const HelmholtzProblem<Scalar>& prob) {
  const auto& grid = prob.grid;
  detail::check_cell_field(grid, prob.source);
  if (!(prob.absorption > Scalar(0)))
    throw Error(ErrorCode::SingularSystem, "absorption must be positive for a Neumann problem");

  const int N = grid.cells();
  const auto& w = grid.volumes();
  const auto& metric = grid.face_metric();
  const Scalar inv_dr = Scalar(1) / grid.dr();

  Field<Scalar> lower(N), diag(N), upper(N), rhs(N);
  for (int i = 0; i < N; ++i) {
    const Scalar k_in = i == 0 ? Scalar(0) : metric(i) * inv_dr;
    const Scalar k_out = i == N - 1 ? Scalar(0) : metric(i + 1) * inv_dr;
    lower(i) = -k_in;
    upper(i) = -k_out;
    diag(i) = k_in + k_out + prob.absorption * w(i);
    rhs(i) = prob.load_coeff * w(i) * prob.source(i);
  }
  return solve_tridiagonal(lower, diag, upper, rhs);
}

template <typename Scalar>
Field<Scalar> solve_helmholtz(const RadialGrid<Scalar>& grid, Scalar absorption, Scalar load_coeff,
                              const Field<Scalar>& source) {
  return solve_helmholtz(HelmholtzProblem<Scalar>{grid, absorption, load_coeff, source});
}

/// Face-centered z_r: central difference across interior faces, zero at
/// r = 0 and r = R. Length N+1.
template <typename Scalar, typename Derived>
Field<Scalar> radial_gradient(const RadialGrid<Scalar>& grid, const Eigen::MatrixBase<Derived>& z) {
  detail::check_cell_field(grid, z);
  const int N = grid.cells();
  Field<Scalar> grad = Field<Scalar>::Zero(N + 1);
  const Scalar inv_dr = Scalar(1) / grid.dr();
  for (int j = 1; j < N; ++j) grad(j) = (Scalar(z(j)) - Scalar(z(j - 1))) * inv_dr;
  return grad;
}

}  // namespace chemolab
