#include <doctest.h>

#include <numbers>

#include "chemolab/grid.hpp"
#include "chemolab/tridiagonal.hpp"

using namespace chemolab;

TEST_CASE("weights telescope") {
  const Grid g = build_grid(3, 1.0, 8);
  CHECK(g.volumes().sum() == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(g.faces()(0) == 0.0);
  CHECK(g.faces()(8) == 1.0);

  const Grid flat = build_grid(1, 2.0, 16);
  for (int i = 0; i < 16; ++i) CHECK(flat.volumes()(i) == doctest::Approx(0.125).epsilon(1e-15));

  for (int n : {1, 2, 3, 5, 8}) {
    const Grid h = build_grid(n, 1.7, 333);
    CHECK(h.volumes().sum() == doctest::Approx(std::pow(1.7, n) / n).epsilon(1e-13));
  }
}

TEST_CASE("too coarse") {
  try {
    build_grid(3, 1.0, 4);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooCoarse);
  }
}

TEST_CASE("sphere areas") {
  CHECK(unit_sphere_area<double>(1) == doctest::Approx(2.0));
  CHECK(unit_sphere_area<double>(2) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(unit_sphere_area<double>(3) == doctest::Approx(4.0 * std::numbers::pi));
}

TEST_CASE("integrate") {
  const Grid g = build_grid(3, 1.0, 64);
  CHECK(integrate(g, FieldXd::Ones(64)) == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-13));
  CHECK(integrate(g, FieldXd::Zero(64)) == 0.0);

  // u = r on [0,1] in 1-D: cell averages of r are the centers
  const Grid line = build_grid(1, 1.0, 32);
  CHECK(integrate(line, line.centers()) == doctest::Approx(1.0).epsilon(1e-13));

  try {
    integrate(g, FieldXd::Ones(10));
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
}

TEST_CASE("mass coordinate") {
  const Grid g = build_grid(3, 2.0, 40);
  const FieldXd u = FieldXd::Constant(40, 1.5);
  const FieldXd U = to_mass_coordinate(g, u);
  REQUIRE(U.size() == 41);
  for (int k = 0; k <= 40; ++k) CHECK(U(k) == doctest::Approx(1.5 * g.s_nodes()(k) / 3.0).epsilon(1e-13));
  CHECK(to_mass_coordinate(g, FieldXd::Zero(40)).cwiseAbs().maxCoeff() == 0.0);

  const Grid unit = build_grid(3, 1.0, 16);
  CHECK(to_mass_coordinate(unit, FieldXd::Ones(16))(16) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("mass coordinate agrees with integrate and is monotone") {
  const Grid g = build_grid(4, 1.3, 100);
  FieldXd u(100);
  for (int i = 0; i < 100; ++i) u(i) = std::exp(-g.centers()(i)) * (1.0 + std::sin(7.0 * i));
  const FieldXd U = to_mass_coordinate(g, u);
  CHECK(integrate(g, u) == doctest::Approx(g.sphere_area() * U(100)).epsilon(1e-12));
  for (int k = 1; k <= 100; ++k) CHECK(U(k) >= U(k - 1));
}

TEST_CASE("Thomas solver matches a dense solve") {
  const int N = 12;
  FieldXd lo(N), di(N), up(N), rhs(N);
  for (int i = 0; i < N; ++i) {
    lo(i) = -1.0 - 0.1 * i;
    up(i) = -0.5;
    di(i) = 4.0 + i;
    rhs(i) = std::cos(i);
  }
  const FieldXd x = solve_tridiagonal(lo, di, up, rhs);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    A(i, i) = di(i);
    if (i > 0) A(i, i - 1) = lo(i);
    if (i + 1 < N) A(i, i + 1) = up(i);
  }
  CHECK((A * x - rhs).cwiseAbs().maxCoeff() < 1e-13);

  try {
    solve_tridiagonal(lo, FieldXd(FieldXd::Zero(N)), up, rhs);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularSystem);
  }
  try {
    solve_tridiagonal(lo, di, up, FieldXd(FieldXd::Zero(3)));
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
}
