#include "chemolab/initdata.hpp"

#include <algorithm>
#include <cmath>

namespace chemolab {

const char* to_string(InitialKind k) {
  switch (k) {
    case InitialKind::SingularProfile: return "singular";
    case InitialKind::GaussianBump: return "gaussian";
    case InitialKind::Constant: return "constant";
  }
  return "?";
}

InitialKind initial_kind_from_string(const std::string& name) {
  if (name == "singular") return InitialKind::SingularProfile;
  if (name == "gaussian") return InitialKind::GaussianBump;
  if (name == "constant") return InitialKind::Constant;
  throw Error(ErrorCode::ValidationError, "unknown init.kind \"" + name + "\"");
}

double mass_within(const Grid& grid, const FieldXd& u, double r) {
  detail::check_cell_field(grid, u);
  const double n = grid.dim();
  const double s_cut = std::pow(std::min(r, grid.radius()), n);
  const auto& s = grid.s_nodes();
  double acc = 0.0;
  for (int i = 0; i < grid.cells(); ++i) {
    if (s(i) >= s_cut) break;
    const double covered = std::min(s(i + 1), s_cut) - s(i);
    acc += covered / n * u(i);
  }
  return grid.sphere_area() * acc;
}

InitialData make_initial(const InitialDataSpec& spec, const Grid& grid) {
  if (!(spec.M0 > 0.0) || !std::isfinite(spec.M0)) throw Error(ErrorCode::InfeasibleMass, "M0 must be positive");
  const bool shaped = spec.kind != InitialKind::Constant;
  if (shaped && !(spec.core_radius > 0.0)) throw Error(ErrorCode::BadCore, "core radius must be positive");
  if (spec.kind == InitialKind::SingularProfile && !(spec.sigma > 0.0))
    throw Error(ErrorCode::ValidationError, "sigma must be positive");
  const double r1 = spec.r1 > 0.0 ? spec.r1 : grid.radius();
  if (r1 > grid.radius()) throw Error(ErrorCode::ValidationError, "r1 must lie in (0, R]");

  const int N = grid.cells();
  const auto& r = grid.centers();
  const double rho2 = spec.core_radius * spec.core_radius;
  FieldXd shape(N);
  for (int i = 0; i < N; ++i) {
    switch (spec.kind) {
      case InitialKind::SingularProfile:
        shape(i) = std::pow(r(i) * r(i) + rho2, -spec.sigma / 2.0);
        break;
      case InitialKind::GaussianBump:
        shape(i) = std::exp(-r(i) * r(i) / (2.0 * rho2));
        break;
      case InitialKind::Constant:
        shape(i) = 1.0;
        break;
    }
  }

  const double scale = spec.M0 / integrate(grid, shape);
  InitialData out;
  out.u0 = scale * shape;
  out.actual_mass = integrate(grid, out.u0);
  out.mass_in_r1 = mass_within(grid, out.u0, r1);
  if (spec.kind == InitialKind::SingularProfile) {
    // r^sigma u0(r) = c (r^2 / (r^2 + rho0^2))^{sigma/2} increases in r
    const double R = grid.radius();
    out.profile_bound_L = scale * std::pow(R * R / (R * R + rho2), spec.sigma / 2.0);
    if (spec.L) out.profile_bound_met = *out.profile_bound_L <= *spec.L;
  }
  if (spec.M1_check) out.concentration_met = out.mass_in_r1 >= *spec.M1_check;
  return out;
}

}  // namespace chemolab
