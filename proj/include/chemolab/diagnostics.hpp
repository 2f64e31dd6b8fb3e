#pragma once

#include <array>
#include <span>
#include <vector>

#include "chemolab/grid.hpp"
#include "chemolab/model.hpp"
#include "chemolab/state.hpp"

namespace chemolab {

/// One row of timeseries.csv.
struct NormTrace {
  double t = 0.0;
  double linf_u = 0.0;
  double min_u = 0.0;
  double mass_u = 0.0;
  double mass_v = 0.0;
  double mass_w = 0.0;
  double lsigma_u = 0.0;
  double profile_sup = 0.0;
  double dt = 0.0;
};

enum class Outcome { Bounded, Blowup, Inconclusive };
const char* to_string(Outcome o);

/// U, V, W at the N+1 mass-coordinate nodes s_k = r_{k-1/2}^n (k = 0..N).
struct MassFunctions {
  FieldXd U;
  FieldXd V;
  FieldXd W;
};

/// Moment functional and the six terms of its lower bound
///   dphi/dt >= J1 - J2 + J3 - J4 + J5 - J6
/// at one time. dphi_dt and margin are only set by audit_frames.
struct MomentDiagnostics {
  double t = 0.0;
  double b = 0.5;
  double s0 = 0.0;
  double phi = 0.0;
  std::array<double, 6> J{};
  double dphi_dt = 0.0;
  double margin = 0.0;

  double lower_bound() const { return J[0] - J[1] + J[2] - J[3] + J[4] - J[5]; }
};

/// profile_sigma <= 0 disables the profile monitor column.
NormTrace norms(const State& state, const Grid& grid, double sigma_norm, double profile_sigma);

MassFunctions mass_functions(const State& state, const Grid& grid);

/// int_0^{s0} s^{-b} (s0 - s) g(s) ds for g given at the nodes (g linear
/// between nodes). Each subinterval is integrated exactly against the weight,
/// which absorbs the integrable s^{-b} singularity at 0.
double window_integral(std::span<const double> s_nodes, std::span<const double> g, double s0, double b);

/// phi(s0) = int_0^{s0} s^{-b} (s0 - s) U(s) ds
double moment_phi(std::span<const double> s_nodes, std::span<const double> U, double s0, double b);
double moment_phi(const Grid& grid, const FieldXd& U, double s0, double b);

/// phi and J1..J6 at one snapshot. In the (nU_s + 1) powers nU_s is the
/// face average of the adjacent cells; the bare nU_s factor of the drift
/// terms J1, J2, J4, J5 is the upwind cell of the face velocity, as in the
/// flux. U_ss is the centered difference of the cellwise slopes.
MomentDiagnostics inequality_terms(const State& state, const ModelParams& params, const Grid& grid, double s0,
                                   double b);

/// inequality_terms at every frame plus dphi/dt from three-point differences
/// across neighbouring frames (one-sided at the ends).
std::vector<MomentDiagnostics> audit_frames(std::span<const State> frames, const ModelParams& params,
                                            const Grid& grid, double s0, double b);

/// max_i u_i r_i^sigma
double profile_monitor(const State& state, const Grid& grid, double sigma);

/// BLOWUP if the threshold was crossed, or the trace stops short of the
/// horizon with L-infinity still increasing (step collapse). BOUNDED if the
/// horizon is reached and the relative growth over the final 20% is below
/// ctl.plateau_rate. INCONCLUSIVE otherwise.
Outcome classify_outcome(std::span<const NormTrace> trace, const StepControl& ctl);

}  // namespace chemolab
