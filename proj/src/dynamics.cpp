#include "chemolab/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "chemolab/elliptic.hpp"

namespace chemolab {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Horizon: return "horizon";
    case Termination::Threshold: return "threshold";
    case Termination::StepCollapse: return "step-collapse";
  }
  return "?";
}

void validate_step_control(const StepControl& ctl) {
  if (!(ctl.cfl_diff > 0.0 && ctl.cfl_diff <= 1.0)) throw Error(ErrorCode::ValidationError, "cfl_diff must lie in (0,1]");
  if (!(ctl.cfl_adv > 0.0 && ctl.cfl_adv <= 1.0)) throw Error(ErrorCode::ValidationError, "cfl_adv must lie in (0,1]");
  if (!(ctl.T_horizon > 0.0)) throw Error(ErrorCode::ValidationError, "T_horizon must be positive");
  if (!(ctl.dt_min > 0.0 && ctl.dt_min < ctl.T_horizon))
    throw Error(ErrorCode::ValidationError, "dt_min must lie in (0, T_horizon)");
  if (!(ctl.u_max_detect > 1.0)) throw Error(ErrorCode::ValidationError, "u_max_detect must exceed 1");
  if (!(ctl.plateau_rate > 0.0)) throw Error(ErrorCode::ValidationError, "plateau_rate must be positive");
  if (ctl.max_halvings < 0) throw Error(ErrorCode::ValidationError, "max_halvings must be nonnegative");
}

namespace {

// x^e with shortcuts for the exponents that dominate typical runs.
inline double power(double x, double e) {
  if (e == 0.0) return 1.0;
  if (e == 1.0) return x;
  if (e == -1.0) return 1.0 / x;
  if (e == 2.0) return x * x;
  if (e == 0.5) return std::sqrt(x);
  if (e == -0.5) return 1.0 / std::sqrt(x);
  return std::pow(x, e);
}

struct FaceTerms {
  FieldXd diffusivity;  // D(u~) at faces
  FieldXd drift;        // c at faces
  FieldXd flux;         // F at faces
};

FaceTerms face_terms(const State& state, const ModelParams& prm, const Grid& grid) {
  const int N = grid.cells();
  const auto& u = state.u;
  const auto& metric = grid.face_metric();
  const double inv_dr = 1.0 / grid.dr();

  FaceTerms ft{FieldXd::Zero(N + 1), FieldXd::Zero(N + 1), FieldXd::Zero(N + 1)};
  for (int j = 1; j < N; ++j) {
    const double left = u(j - 1), right = u(j);
    const double shifted = 0.5 * (left + right) + 1.0;
    const double D = power(shifted, prm.m - 1.0);
    const double v_r = (state.v(j) - state.v(j - 1)) * inv_dr;
    const double w_r = (state.w(j) - state.w(j - 1)) * inv_dr;
    const double c = -prm.chi * power(shifted, prm.p - 2.0) * v_r + prm.xi * power(shifted, prm.q - 2.0) * w_r;
    // transport velocity is -c
    const double upwind = c > 0.0 ? right : left;
    ft.diffusivity(j) = D;
    ft.drift(j) = c;
    ft.flux(j) = metric(j) * (D * (right - left) * inv_dr + upwind * c);
  }
  return ft;
}

double stable_dt_from(const FaceTerms& ft, const State& state, const ModelParams& prm, const Grid& grid,
                      const StepControl& ctl) {
  const double dr = grid.dr();
  const int N = grid.cells();
  const double max_D = ft.diffusivity.segment(1, N - 1).maxCoeff();
  const double max_c = ft.drift.cwiseAbs().maxCoeff();

  double dt = max_D > 0.0 ? ctl.cfl_diff * dr * dr / (2.0 * max_D) : ctl.T_horizon;
  if (max_c > 0.0) dt = std::min(dt, ctl.cfl_adv * dr / max_c);
  if (prm.source_enabled) {
    const double u_max = state.u.maxCoeff();
    const double absorption = prm.mu1 * std::pow(grid.radius(), prm.a) * power(u_max, prm.kappa - 1.0);
    const double rate = std::max(prm.lambda0, absorption);
    if (rate > 0.0) dt = std::min(dt, 0.1 / rate);
  }
  if (!(dt >= ctl.dt_min)) throw Error(ErrorCode::StepCollapse, "stable step below dt_min at t = " + std::to_string(state.t));
  return std::min(dt, ctl.T_horizon - state.t);
}

void check_initial(const FieldXd& u0, const Grid& grid) {
  if (u0.size() != grid.cells()) throw Error(ErrorCode::LengthMismatch, "initial data length");
  bool nonzero = false;
  for (Eigen::Index i = 0; i < u0.size(); ++i) {
    if (!std::isfinite(u0(i)) || u0(i) < 0.0) throw Error(ErrorCode::InvalidInitialData, "u0 must be finite and >= 0");
    nonzero = nonzero || u0(i) > 0.0;
  }
  if (!nonzero) throw Error(ErrorCode::InvalidInitialData, "u0 vanishes identically");
}

}  // namespace

void refresh_elliptic(State& state, const ModelParams& params, const Grid& grid) {
  state.v = solve_helmholtz(grid, params.beta, params.alpha, state.u);
  state.w = solve_helmholtz(grid, params.delta, params.gamma, state.u);
}

State make_state(const ValidatedParams& vp, const Grid& grid, const FieldXd& u0) {
  check_initial(u0, grid);
  State s;
  s.u = u0;
  refresh_elliptic(s, vp.params(), grid);
  return s;
}

FieldXd compute_fluxes(const State& state, const ModelParams& params, const Grid& grid) {
  return face_terms(state, params, grid).flux;
}

double stable_dt(const State& state, const ModelParams& params, const Grid& grid, const StepControl& ctl) {
  return stable_dt_from(face_terms(state, params, grid), state, params, grid, ctl);
}

State step(const State& state, const ModelParams& params, const Grid& grid, const StepControl& ctl,
           std::optional<double> dt_cap) {
  const auto ft = face_terms(state, params, grid);
  double dt = stable_dt_from(ft, state, params, grid, ctl);
  if (dt_cap) dt = std::min(dt, *dt_cap);

  const int N = grid.cells();
  const auto& w = grid.volumes();
  FieldXd rate(N);
  for (int i = 0; i < N; ++i) rate(i) = (ft.flux(i + 1) - ft.flux(i)) / w(i);
  if (params.source_enabled) {
    const auto& r = grid.centers();
    for (int i = 0; i < N; ++i) {
      const double ui = state.u(i);
      const double absorption = params.mu1 > 0.0 ? params.mu1 * power(r(i), params.a) * power(ui, params.kappa) : 0.0;
      rate(i) += params.lambda0 * ui - absorption;
    }
  }

  State next;
  for (int attempt = 0; attempt <= ctl.max_halvings; ++attempt) {
    next.u = state.u + dt * rate;
    if (next.u.allFinite() && next.u.minCoeff() >= 0.0) {
      next.t = state.t + dt;
      next.dt_last = dt;
      next.steps = state.steps + 1;
      refresh_elliptic(next, params, grid);
      return next;
    }
    dt *= 0.5;
  }
  throw Error(ErrorCode::StepCollapse, "positivity not restored after halvings at t = " + std::to_string(state.t));
}

std::optional<double> extrapolate_blowup_time(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || y.size() < 3) return std::nullopt;
  const double floor_value = y.back() / 10.0;
  double n = 0, st = 0, sx = 0, stt = 0, stx = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < floor_value || !(y[i] > 0.0)) continue;
    const double x = 1.0 / y[i];
    n += 1;
    st += t[i];
    sx += x;
    stt += t[i] * t[i];
    stx += t[i] * x;
  }
  if (n < 3) return std::nullopt;
  const double denom = n * stt - st * st;
  if (!(denom > 0.0)) return std::nullopt;
  const double slope = (n * stx - st * sx) / denom;
  const double intercept = (sx - slope * st) / n;
  if (!(slope < 0.0)) return std::nullopt;
  return -intercept / slope;
}

Trajectory run(const ValidatedParams& vp, const Grid& grid, const FieldXd& u0, const StepControl& ctl,
               const RunOptions& opts) {
  validate_step_control(ctl);
  const auto& prm = vp.params();
  if (opts.frame_dt <= 0.0 && opts.frames < 1) throw Error(ErrorCode::ValidationError, "need at least one frame");
  const double frame_dt = opts.frame_dt > 0.0 ? opts.frame_dt : ctl.T_horizon / opts.frames;
  const double T = ctl.T_horizon;
  const double t_tol = 1e-12 * std::max(1.0, T);

  Trajectory out;
  State state = make_state(vp, grid, u0);

  auto record = [&](const State& s) {
    out.trace.push_back(norms(s, grid, opts.sigma_norm, opts.profile_sigma));
    if (opts.keep_frames) out.frames.push_back(s);
  };
  record(state);

  std::vector<double> growth_t{state.t};
  std::vector<double> growth_y{state.u.maxCoeff()};

  std::int64_t next_frame = 1;
  for (;;) {
    const double linf = state.u.maxCoeff();
    if (linf >= ctl.u_max_detect) {
      out.termination = Termination::Threshold;
      break;
    }
    if (state.t >= T - t_tol) {
      out.termination = Termination::Horizon;
      break;
    }
    const double t_frame = std::min(static_cast<double>(next_frame) * frame_dt, T);
    try {
      state = step(state, prm, grid, ctl, t_frame - state.t);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::StepCollapse) throw;
      out.termination = Termination::StepCollapse;
      break;
    }
    if (std::abs(state.t - t_frame) <= t_tol) {
      state.t = t_frame;
      record(state);
      ++next_frame;
    }
    if (opts.on_step) opts.on_step(state);

    const double y = state.u.maxCoeff();
    if (y >= 1.01 * growth_y.back()) {
      growth_t.push_back(state.t);
      growth_y.push_back(y);
    }
  }
  if (out.trace.back().t != state.t) record(state);
  if (growth_t.back() != state.t) {
    growth_t.push_back(state.t);
    growth_y.push_back(state.u.maxCoeff());
  }

  out.outcome = classify_outcome(out.trace, ctl);
  if (out.outcome == Outcome::Blowup) {
    out.T_detect = state.t;
    out.T_star_estimate = extrapolate_blowup_time(growth_t, growth_y);
  }
  out.final_state = std::move(state);
  return out;
}

}  // namespace chemolab
