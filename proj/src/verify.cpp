#include "chemolab/verify.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "chemolab/dynamics.hpp"
#include "chemolab/elliptic.hpp"
#include "chemolab/initdata.hpp"

namespace chemolab {

namespace {

constexpr double kPi = std::numbers::pi;

// -lap v + v = u for v = cos(pi r) in R^3
double manufactured_load(double r) {
  return (1.0 + kPi * kPi) * std::cos(kPi * r) + 2.0 * kPi * std::sin(kPi * r) / r;
}

double mms_error(int cells) {
  const Grid grid = build_grid(3, 1.0, cells);
  FieldXd u(cells);
  for (int i = 0; i < cells; ++i) u(i) = manufactured_load(grid.centers()(i));
  const FieldXd v = solve_helmholtz(grid, 1.0, 1.0, u);
  double err = 0.0;
  for (int i = 0; i < cells; ++i) err = std::max(err, std::abs(v(i) - std::cos(kPi * grid.centers()(i))));
  return err;
}

CheckResult check_mms() {
  const double e128 = mms_error(128), e256 = mms_error(256), e512 = mms_error(512);
  const double order1 = std::log2(e128 / e256), order2 = std::log2(e256 / e512);
  std::ostringstream os;
  os << "Linf errors " << e128 << ", " << e256 << ", " << e512 << "; orders " << order1 << ", " << order2;
  return {"elliptic manufactured solution", order1 >= 1.9 && order2 >= 1.9 && e512 < 1e-4, os.str()};
}

CheckResult check_conservation() {
  ModelParams prm;
  prm.p = 2.0;
  prm.q = 2.5;
  const DomainSpec dom{3, 1.0};
  const auto vp = validate_params(prm, dom);
  const Grid grid = build_grid(3, 1.0, 128);
  InitialDataSpec spec;
  spec.kind = InitialKind::GaussianBump;
  spec.core_radius = 0.15;
  spec.M0 = 10.0;
  State s = make_state(vp, grid, make_initial(spec, grid).u0);
  StepControl ctl;
  ctl.T_horizon = 1e3;
  const double m0 = integrate(grid, s.u);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    s = step(s, prm, grid, ctl);
    worst = std::max(worst, std::abs(integrate(grid, s.u) - m0) / m0);
  }
  std::ostringstream os;
  os << "max relative mass drift over 1e4 steps " << worst;
  return {"mass conservation", worst <= 1e-10, os.str()};
}

CheckResult check_logistic() {
  ModelParams prm;
  prm.chi = 0.0;
  prm.xi = 0.0;
  prm.source_enabled = true;
  prm.lambda0 = 1.0;
  prm.mu1 = 1.0;
  prm.a = 0.0;
  prm.kappa = 2.0;
  const DomainSpec dom{3, 1.0};
  const auto vp = validate_params(prm, dom, true);
  const Grid grid = build_grid(3, 1.0, 64);
  State s = make_state(vp, grid, FieldXd::Constant(64, 0.5));
  StepControl ctl;
  ctl.T_horizon = 5.0;
  double worst = 0.0;
  while (s.t < ctl.T_horizon) {
    s = step(s, prm, grid, ctl);
    const double exact = 1.0 / (1.0 + std::exp(-s.t));
    worst = std::max(worst, (s.u.array() - exact).abs().maxCoeff());
  }
  std::ostringstream os;
  os << "max |u - 1/(1+exp(-t))| on [0,5] = " << worst;
  return {"logistic limit", worst <= 5e-3, os.str()};
}

}  // namespace

std::vector<CheckResult> run_verification_suite() {
  return {check_mms(), check_conservation(), check_logistic()};
}

}  // namespace chemolab
