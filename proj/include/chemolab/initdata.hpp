#pragma once

#include <optional>
#include <string>

#include "chemolab/grid.hpp"

namespace chemolab {

enum class InitialKind { SingularProfile, GaussianBump, Constant };

const char* to_string(InitialKind k);
InitialKind initial_kind_from_string(const std::string& name);

/// Admissible initial data. SingularProfile is c (r^2 + rho0^2)^{-sigma/2},
/// GaussianBump is c exp(-r^2 / (2 rho0^2)), Constant is M0 / |Omega|; c is
/// fixed by the total mass M0.
struct InitialDataSpec {
  InitialKind kind = InitialKind::Constant;
  std::optional<double> L;
  double sigma = 1.0;
  double core_radius = 0.0;
  double M0 = 1.0;
  double r1 = 0.0;
  std::optional<double> M1_check;
};

struct InitialData {
  FieldXd u0;
  double actual_mass = 0.0;
  double mass_in_r1 = 0.0;
  /// Smallest L' with u0(r) <= L' r^{-sigma} on (0, R]; SingularProfile only.
  std::optional<double> profile_bound_L;
  /// Whether mass_in_r1 >= M1_check, when requested.
  std::optional<bool> concentration_met;
  /// Whether profile_bound_L <= L, when L is given.
  std::optional<bool> profile_bound_met;
};

InitialData make_initial(const InitialDataSpec& spec, const Grid& grid);

/// Mass inside B_r(0) of a cellwise-constant field; the cell cut by r
/// contributes its volume fraction.
double mass_within(const Grid& grid, const FieldXd& u, double r);

}  // namespace chemolab
