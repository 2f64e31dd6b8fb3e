#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chemolab/elliptic.hpp"

using namespace chemolab;

namespace {

constexpr double pi = std::numbers::pi;

FieldXd manufactured(const Grid& g) {
  FieldXd u(g.cells());
  for (int i = 0; i < g.cells(); ++i) {
    const double r = g.centers()(i);
    u(i) = (1.0 + pi * pi) * std::cos(pi * r) + 2.0 * pi * std::sin(pi * r) / r;
  }
  return u;
}

double mms_error(int N) {
  const Grid g = build_grid(3, 1.0, N);
  const FieldXd v = solve_helmholtz(g, 1.0, 1.0, manufactured(g));
  double e = 0.0;
  for (int i = 0; i < N; ++i) e = std::max(e, std::abs(v(i) - std::cos(pi * g.centers()(i))));
  return e;
}

}  // namespace

TEST_CASE("constant load gives the constant solution") {
  const Grid g = build_grid(3, 1.0, 32);
  const FieldXd v = solve_helmholtz(g, 2.0, 3.0, FieldXd(FieldXd::Constant(32, 1.25)));
  for (int i = 0; i < 32; ++i) CHECK(v(i) == doctest::Approx(3.0 * 1.25 / 2.0).epsilon(1e-13));
  CHECK(radial_gradient(g, v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("manufactured solution converges at second order") {
  const double e64 = mms_error(64), e128 = mms_error(128), e256 = mms_error(256);
  CHECK(e64 / e128 >= 3.6);
  CHECK(e64 / e128 <= 4.4);
  CHECK(e128 / e256 >= 3.6);
  CHECK(e128 / e256 <= 4.4);
}

TEST_CASE("integral identity") {
  const Grid g = build_grid(3, 1.0, 50);
  FieldXd u(50);
  for (int i = 0; i < 50; ++i) u(i) = std::exp(-20.0 * g.centers()(i) * g.centers()(i));
  u /= integrate(g, u);  // total 1
  const FieldXd w = solve_helmholtz(g, 4.0, 2.0, u);
  CHECK(integrate(g, w) == doctest::Approx(0.5).epsilon(1e-12));

  for (int n : {1, 2, 3, 6}) {
    const Grid h = build_grid(n, 2.0, 77);
    FieldXd z(77);
    for (int i = 0; i < 77; ++i) z(i) = 1.0 + std::cos(3.0 * i) + (i % 5 == 0 ? 10.0 : 0.0);
    const FieldXd v = solve_helmholtz(h, 0.7, 1.3, z);
    const double lhs = 0.7 * integrate(h, v), rhs = 1.3 * integrate(h, z);
    CHECK(std::abs(lhs - rhs) / rhs <= 1e-10);
  }
}

TEST_CASE("maximum principle") {
  const Grid g = build_grid(3, 1.0, 64);
  FieldXd u = FieldXd::Zero(64);
  u(0) = 1e6;
  u(40) = 1e-8;
  const FieldXd v = solve_helmholtz(g, 1.0, 1.0, u);
  CHECK(v.minCoeff() >= 0.0);
}

TEST_CASE("radial gradient") {
  const Grid g = build_grid(3, 1.0, 200);
  FieldXd v(200);
  for (int i = 0; i < 200; ++i) v(i) = std::cos(pi * g.centers()(i));
  const FieldXd vr = radial_gradient(g, v);
  REQUIRE(vr.size() == 201);
  CHECK(vr(0) == 0.0);
  CHECK(vr(200) == 0.0);
  for (int k = 1; k < 200; ++k) CHECK(std::abs(vr(k) + pi * std::sin(pi * g.faces()(k))) < 1e-4);
}

TEST_CASE("face flux identity r^{n-1} v_r = beta V - alpha U") {
  const Grid g = build_grid(3, 1.0, 128);
  const FieldXd u = manufactured(g);
  const double alpha = 1.5, beta = 0.8;
  const FieldXd v = solve_helmholtz(g, beta, alpha, u);
  const FieldXd vr = radial_gradient(g, v);
  const FieldXd U = to_mass_coordinate(g, u), V = to_mass_coordinate(g, v);
  double worst = 0.0, scale = 0.0;
  for (int k = 0; k <= 128; ++k) {
    worst = std::max(worst, std::abs(g.face_metric()(k) * vr(k) - (beta * V(k) - alpha * U(k))));
    scale = std::max(scale, std::abs(alpha * U(k)));
  }
  CHECK(worst <= 1e-12 * scale);
}
