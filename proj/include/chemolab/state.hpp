#pragma once

#include <cstdint>

#include "chemolab/grid.hpp"

namespace chemolab {

/// Snapshot of (u, v, w) at time t. v and w are always the elliptic
/// solutions belonging to u.
struct State {
  double t = 0.0;
  FieldXd u;
  FieldXd v;
  FieldXd w;
  double dt_last = 0.0;
  std::int64_t steps = 0;
};

/// Explicit step-size control and the finite-horizon blow-up detector.
struct StepControl {
  double cfl_diff = 0.45;
  double cfl_adv = 0.8;
  double dt_min = 1e-12;
  double u_max_detect = 1e6;
  double T_horizon = 1.0;
  /// BOUNDED requires relative L-infinity growth below this over the last
  /// 20% of the horizon.
  double plateau_rate = 0.01;
  int max_halvings = 20;
};

void validate_step_control(const StepControl& ctl);

}  // namespace chemolab
