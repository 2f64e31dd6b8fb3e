#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "chemolab/error.hpp"

namespace chemolab {

template <typename Scalar>
using Field = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using FieldXd = Field<double>;

/// Surface area of the unit (n-1)-sphere in R^n: 2 pi^{n/2} / Gamma(n/2).
template <typename Scalar>
Scalar unit_sphere_area(int n) {
  using std::pow;
  using std::tgamma;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  return Scalar(2) * pow(pi, Scalar(n) / Scalar(2)) / tgamma(Scalar(n) / Scalar(2));
}

/// Uniform cell-centered grid on [0, R] for radial functions on B_R(0) in R^n.
///
/// Cell i covers [r_{i-1/2}, r_{i+1/2}] with r_{i+1/2} = (i+1) dr. Its radial
/// volume is w_i = (r_{i+1/2}^n - r_{i-1/2}^n) / n, so the weights telescope
/// to R^n / n. The mass coordinate s = r^n is sampled at the N+1 faces.
template <typename Scalar>
class RadialGrid {
 public:
  static constexpr int kMinCells = 8;

  RadialGrid(int n, Scalar R, int cells) : n_(n), R_(R), cells_(cells) {
    if (cells < kMinCells) throw Error(ErrorCode::TooCoarse, "N = " + std::to_string(cells));
    if (n < 1) throw Error(ErrorCode::InvalidDimension, "n = " + std::to_string(n));
    if (!(R > Scalar(0))) throw Error(ErrorCode::InvalidDomain, "R must be positive");

    dr_ = R / Scalar(cells);
    centers_.resize(cells);
    faces_.resize(cells + 1);
    s_nodes_.resize(cells + 1);
    volumes_.resize(cells);
    face_metric_.resize(cells + 1);

    using std::pow;
    faces_(0) = Scalar(0);
    s_nodes_(0) = Scalar(0);
    for (int i = 0; i < cells; ++i) {
      centers_(i) = (Scalar(i) + Scalar(0.5)) * dr_;
      faces_(i + 1) = i + 1 == cells ? R : Scalar(i + 1) * dr_;
      s_nodes_(i + 1) = pow(faces_(i + 1), n);
      volumes_(i) = (s_nodes_(i + 1) - s_nodes_(i)) / Scalar(n);
    }
    for (int j = 0; j <= cells; ++j) face_metric_(j) = pow(faces_(j), n - 1);
    sphere_ = unit_sphere_area<Scalar>(n);
  }

  int dim() const noexcept { return n_; }
  Scalar radius() const noexcept { return R_; }
  int cells() const noexcept { return cells_; }
  Scalar dr() const noexcept { return dr_; }
  /// omega_{n-1}
  Scalar sphere_area() const noexcept { return sphere_; }

  const Field<Scalar>& centers() const noexcept { return centers_; }
  /// N+1 face radii, faces()(0) = 0 and faces()(N) = R.
  const Field<Scalar>& faces() const noexcept { return faces_; }
  /// s = r^n at the faces.
  const Field<Scalar>& s_nodes() const noexcept { return s_nodes_; }
  const Field<Scalar>& volumes() const noexcept { return volumes_; }
  /// r^{n-1} at the faces.
  const Field<Scalar>& face_metric() const noexcept { return face_metric_; }

  /// |Omega| = omega_{n-1} R^n / n
  Scalar ball_volume() const { return sphere_ * s_nodes_(cells_) / Scalar(n_); }

 private:
  int n_;
  Scalar R_;
  int cells_;
  Scalar dr_{};
  Scalar sphere_{};
  Field<Scalar> centers_;
  Field<Scalar> faces_;
  Field<Scalar> s_nodes_;
  Field<Scalar> volumes_;
  Field<Scalar> face_metric_;
};

using Grid = RadialGrid<double>;

inline Grid build_grid(int n, double R, int cells) { return Grid(n, R, cells); }

namespace detail {
template <typename Scalar, typename Derived>
void check_cell_field(const RadialGrid<Scalar>& grid, const Eigen::MatrixBase<Derived>& field) {
  if (field.size() != grid.cells())
    throw Error(ErrorCode::LengthMismatch,
                "expected " + std::to_string(grid.cells()) + " values, got " + std::to_string(field.size()));
}
}  // namespace detail

/// Full n-dimensional integral over the ball of a cellwise-constant field.
template <typename Scalar, typename Derived>
Scalar integrate(const RadialGrid<Scalar>& grid, const Eigen::MatrixBase<Derived>& field) {
  detail::check_cell_field(grid, field);
  return grid.sphere_area() * grid.volumes().dot(field.template cast<Scalar>());
}

/// Cumulative radial mass U(s_k) = sum_{i<k} w_i u_i at the N+1 face nodes s_k.
template <typename Scalar, typename Derived>
Field<Scalar> to_mass_coordinate(const RadialGrid<Scalar>& grid, const Eigen::MatrixBase<Derived>& field) {
  detail::check_cell_field(grid, field);
  Field<Scalar> U(grid.cells() + 1);
  U(0) = Scalar(0);
  Scalar acc(0);
  for (int i = 0; i < grid.cells(); ++i) {
    acc += grid.volumes()(i) * Scalar(field(i));
    U(i + 1) = acc;
  }
  return U;
}

}  // namespace chemolab
