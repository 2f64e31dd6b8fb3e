#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "chemolab/diagnostics.hpp"
#include "chemolab/grid.hpp"
#include "chemolab/model.hpp"
#include "chemolab/state.hpp"

namespace chemolab {

/// Builds the initial state: checks u0 >= 0, u0 != 0 and solves for v, w.
State make_state(const ValidatedParams& vp, const Grid& grid, const FieldXd& u0);

/// Re-solves v and w for the current u.
void refresh_elliptic(State& state, const ModelParams& params, const Grid& grid);

/// Face-centered total flux (N+1 values)
///   F = r^{n-1} [ D(u~) u_r + u_up c ],  c = -chi (u~+1)^{p-2} v_r + xi (u~+1)^{q-2} w_r
/// with u~ the arithmetic face average, D(u) = (u+1)^{m-1}, and u_up the cell
/// value on the upwind side of the transport velocity -c. Both boundary
/// faces carry zero flux.
FieldXd compute_fluxes(const State& state, const ModelParams& params, const Grid& grid);

/// Largest admissible explicit step, capped by the remaining horizon.
/// Throws StepCollapse when the stability bound falls below ctl.dt_min.
double stable_dt(const State& state, const ModelParams& params, const Grid& grid, const StepControl& ctl);

/// One forward-Euler step of at most dt_cap (defaults to stable_dt). A step
/// that produces negative u is retried at half the step, up to
/// ctl.max_halvings times.
State step(const State& state, const ModelParams& params, const Grid& grid, const StepControl& ctl,
           std::optional<double> dt_cap = std::nullopt);

enum class Termination { Horizon, Threshold, StepCollapse };
const char* to_string(Termination t);

struct RunOptions {
  /// Frames are written every frame_dt, or every T/frames when frame_dt <= 0.
  int frames = 200;
  double frame_dt = 0.0;
  double sigma_norm = 4.0;
  /// Exponent of the profile monitor; <= 0 disables it.
  double profile_sigma = 0.0;
  bool keep_frames = true;
  /// Called after every accepted step.
  std::function<void(const State&)> on_step;
};

struct Trajectory {
  Outcome outcome = Outcome::Inconclusive;
  Termination termination = Termination::Horizon;
  std::optional<double> T_detect;
  /// Zero of a linear fit of 1/||u||_inf over the last decade of growth.
  std::optional<double> T_star_estimate;
  std::vector<NormTrace> trace;
  std::vector<State> frames;
  State final_state;
};

/// Integrates until the horizon, the detection threshold, or a step collapse.
Trajectory run(const ValidatedParams& vp, const Grid& grid, const FieldXd& u0, const StepControl& ctl,
               const RunOptions& opts = {});

/// Least-squares zero of 1/y against t over samples with y >= y_last / 10.
std::optional<double> extrapolate_blowup_time(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace chemolab
