#include "chemolab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chemolab {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Bounded: return "BOUNDED";
    case Outcome::Blowup: return "BLOWUP";
    case Outcome::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

NormTrace norms(const State& state, const Grid& grid, double sigma_norm, double profile_sigma) {
  NormTrace out;
  out.t = state.t;
  out.dt = state.dt_last;
  out.linf_u = state.u.cwiseAbs().maxCoeff();
  out.min_u = state.u.minCoeff();
  out.mass_u = integrate(grid, state.u);
  out.mass_v = integrate(grid, state.v);
  out.mass_w = integrate(grid, state.w);
  if (sigma_norm > 0.0) {
    const FieldXd powered = state.u.cwiseAbs().array().pow(sigma_norm).matrix();
    out.lsigma_u = std::pow(integrate(grid, powered), 1.0 / sigma_norm);
  }
  if (profile_sigma > 0.0) out.profile_sup = profile_monitor(state, grid, profile_sigma);
  return out;
}

MassFunctions mass_functions(const State& state, const Grid& grid) {
  return {to_mass_coordinate(grid, state.u), to_mass_coordinate(grid, state.v), to_mass_coordinate(grid, state.w)};
}

namespace {

struct WindowMoments {
  double m0, m1, m2;
};

// int_{lo}^{hi} s^{j-b} ds for j = 0, 1, 2
WindowMoments power_moments(double lo, double hi, double b) {
  auto prim = [&](double s, double e) { return s > 0.0 ? std::pow(s, e) / e : 0.0; };
  const double e0 = 1.0 - b, e1 = 2.0 - b, e2 = 3.0 - b;
  return {prim(hi, e0) - prim(lo, e0), prim(hi, e1) - prim(lo, e1), prim(hi, e2) - prim(lo, e2)};
}

void check_window(std::span<const double> s_nodes, double s0, double b) {
  if (!(b > 0.0 && b < 1.0)) throw Error(ErrorCode::BadExponent, "b must lie in (0,1)");
  if (s_nodes.size() < 2) throw Error(ErrorCode::LengthMismatch, "need at least two nodes");
  if (!(s0 > 0.0) || s0 > s_nodes.back()) throw Error(ErrorCode::BadWindow, "s0 must lie in (0, R^n]");
}

}  // namespace

double window_integral(std::span<const double> s_nodes, std::span<const double> g, double s0, double b) {
  check_window(s_nodes, s0, b);
  if (g.size() != s_nodes.size()) throw Error(ErrorCode::LengthMismatch, "integrand and nodes differ in length");

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < s_nodes.size(); ++k) {
    const double sa = s_nodes[k];
    if (sa >= s0) break;
    const double sb_node = s_nodes[k + 1];
    const double slope = (g[k + 1] - g[k]) / (sb_node - sa);
    const double intercept = g[k] - slope * sa;
    const double sb = std::min(sb_node, s0);
    const auto mom = power_moments(sa, sb, b);
    // weight s0 s^{-b} - s^{1-b} against intercept + slope s
    total += intercept * s0 * mom.m0 + (slope * s0 - intercept) * mom.m1 - slope * mom.m2;
  }
  return total;
}

double moment_phi(std::span<const double> s_nodes, std::span<const double> U, double s0, double b) {
  return window_integral(s_nodes, U, s0, b);
}

double moment_phi(const Grid& grid, const FieldXd& U, double s0, double b) {
  if (U.size() != grid.cells() + 1) throw Error(ErrorCode::LengthMismatch, "U must be sampled on the N+1 s-nodes");
  return moment_phi(std::span<const double>(grid.s_nodes().data(), grid.s_nodes().size()),
                    std::span<const double>(U.data(), U.size()), s0, b);
}

MomentDiagnostics inequality_terms(const State& state, const ModelParams& params, const Grid& grid, double s0,
                                   double b) {
  const auto& s = grid.s_nodes();
  check_window(std::span<const double>(s.data(), s.size()), s0, b);

  const int N = grid.cells();
  const double n = grid.dim();
  const auto mf = mass_functions(state, grid);
  const auto& u = state.u;

  std::array<FieldXd, 6> g;
  for (auto& gi : g) gi = FieldXd::Zero(N + 1);

  const double source_exp = params.a / n + 1.0;
  const bool with_source = params.source_enabled && params.mu1 > 0.0;
  double absorbed = 0.0;  // n^{kappa-1} mu1 int_0^{s_k} eta^{a/n} U_s^kappa d eta

  for (int k = 1; k <= N; ++k) {
    const double u_node = k < N ? 0.5 * (u(k - 1) + u(k)) : u(N - 1);
    const double shifted = u_node + 1.0;
    const double attract = std::pow(shifted, params.p - 2.0);
    const double repel = std::pow(shifted, params.q - 2.0);

    // transported factor nU_s from the upwind cell, as the flux takes it
    double u_drift = u_node;
    if (k < N) {
      const double c = -params.chi * attract * (state.v(k) - state.v(k - 1)) +
                       params.xi * repel * (state.w(k) - state.w(k - 1));
      u_drift = c > 0.0 ? u(k) : u(k - 1);
    }

    g[0](k) = params.chi * params.alpha * attract * mf.U(k) * u_drift;
    g[1](k) = params.xi * params.gamma * repel * mf.U(k) * u_drift;
    if (k < N) {
      const double U_ss = 2.0 * (u(k) - u(k - 1)) / (n * (s(k + 1) - s(k - 1)));
      g[2](k) = n * n * std::pow(s(k), 2.0 - 2.0 / n) * std::pow(shifted, params.m - 1.0) * U_ss;
    }
    g[3](k) = params.chi * params.beta * attract * mf.V(k) * u_drift;
    g[4](k) = params.xi * params.delta * repel * mf.W(k) * u_drift;

    if (with_source) {
      // U_s = u_{k-1}/n on the cell between s_{k-1} and s_k
      const double cell = (std::pow(s(k), source_exp) - std::pow(s(k - 1), source_exp)) / source_exp;
      absorbed += params.mu1 / n * std::pow(u(k - 1), params.kappa) * cell;
      g[5](k) = absorbed;
    }
  }

  MomentDiagnostics out;
  out.t = state.t;
  out.b = b;
  out.s0 = s0;
  const std::span<const double> nodes(s.data(), s.size());
  out.phi = window_integral(nodes, std::span<const double>(mf.U.data(), mf.U.size()), s0, b);
  for (int j = 0; j < 6; ++j)
    out.J[j] = window_integral(nodes, std::span<const double>(g[j].data(), g[j].size()), s0, b);
  return out;
}

std::vector<MomentDiagnostics> audit_frames(std::span<const State> frames, const ModelParams& params,
                                            const Grid& grid, double s0, double b) {
  std::vector<MomentDiagnostics> rows;
  rows.reserve(frames.size());
  for (const auto& f : frames) rows.push_back(inequality_terms(f, params, grid, s0, b));

  const std::size_t K = rows.size();
  auto t = [&](std::size_t i) { return rows[i].t; };
  auto phi = [&](std::size_t i) { return rows[i].phi; };
  for (std::size_t i = 0; i < K; ++i) {
    double d = std::numeric_limits<double>::quiet_NaN();
    if (K == 2) {
      d = (phi(1) - phi(0)) / (t(1) - t(0));
    } else if (K >= 3) {
      // three-point Lagrange derivative on nonuniform spacing
      const std::size_t c = i == 0 ? 1 : (i == K - 1 ? K - 2 : i);
      const double t0 = t(c - 1), t1 = t(c), t2 = t(c + 1);
      const double x = t(i);
      const double l0 = ((x - t1) + (x - t2)) / ((t0 - t1) * (t0 - t2));
      const double l1 = ((x - t0) + (x - t2)) / ((t1 - t0) * (t1 - t2));
      const double l2 = ((x - t0) + (x - t1)) / ((t2 - t0) * (t2 - t1));
      d = l0 * phi(c - 1) + l1 * phi(c) + l2 * phi(c + 1);
    }
    rows[i].dphi_dt = d;
    rows[i].margin = d - rows[i].lower_bound();
  }
  return rows;
}

double profile_monitor(const State& state, const Grid& grid, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::BadExponent, "profile exponent must be positive");
  detail::check_cell_field(grid, state.u);
  double best = 0.0;
  for (int i = 0; i < grid.cells(); ++i) best = std::max(best, state.u(i) * std::pow(grid.centers()(i), sigma));
  return best;
}

Outcome classify_outcome(std::span<const NormTrace> trace, const StepControl& ctl) {
  if (trace.empty()) throw Error(ErrorCode::EmptyTrace, "no trace rows");

  for (const auto& row : trace)
    if (row.linf_u >= ctl.u_max_detect) return Outcome::Blowup;

  const auto& last = trace.back();
  const double horizon_tol = 1e-9 * std::max(1.0, ctl.T_horizon);
  if (last.t < ctl.T_horizon - horizon_tol) {
    // stopped early: step collapse
    if (trace.size() >= 2 && last.linf_u > trace[trace.size() - 2].linf_u) return Outcome::Blowup;
    return Outcome::Inconclusive;
  }

  const double window_start = 0.8 * ctl.T_horizon;
  auto it = std::find_if(trace.begin(), trace.end(), [&](const NormTrace& r) { return r.t >= window_start; });
  if (it == trace.end() || it->linf_u <= 0.0) return Outcome::Inconclusive;
  const double growth = (last.linf_u - it->linf_u) / it->linf_u;
  return growth < ctl.plateau_rate ? Outcome::Bounded : Outcome::Inconclusive;
}

}  // namespace chemolab
