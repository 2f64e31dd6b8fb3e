#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chemolab/config.hpp"
#include "chemolab/dynamics.hpp"
#include "chemolab/initdata.hpp"

namespace chemolab {

struct RunRecord {
  std::string config_digest;
  Outcome classification = Outcome::Inconclusive;
  Termination termination = Termination::Horizon;
  std::optional<double> T_detect;
  std::optional<double> T_star_estimate;
  NormTrace final_norms;
  RegimePrediction prediction;
  std::vector<std::filesystem::path> files;
  double wall_seconds = 0.0;
};

struct Simulation {
  Grid grid;
  InitialData initial;
  Trajectory trajectory;
  /// One block of rows per configured s0.
  std::vector<MomentDiagnostics> audit;
};

/// Runs the configured scenario in memory. on_step is forwarded to dynamics.
Simulation simulate(const RunConfig& cfg, std::function<void(const State&)> on_step = {});

/// simulate plus timeseries.csv, snapshots.jsonl, audit.csv (when diag.s0
/// is set) and manifest.json under out_dir.
RunRecord execute_run(const RunConfig& cfg, const std::filesystem::path& out_dir,
                      std::function<void(const State&)> on_step = {});

struct SweepRow {
  double axis1 = 0.0;
  std::optional<double> axis2;
  Verdict predicted = Verdict::NoTheoremApplies;
  /// BOUNDED, BLOWUP, INCONCLUSIVE or ERROR
  std::string observed;
  std::optional<double> T_detect;
  /// Set only when predicted is a theorem verdict and observed is BOUNDED/BLOWUP.
  std::optional<bool> agreement;
  std::string error;
};

/// Runs every grid point (axis1-major order) on up to `jobs` threads, each in
/// out_dir/run_XXXX, and writes out_dir/regime_map.csv. Failed runs are
/// recorded as ERROR and the sweep continues.
std::vector<SweepRow> execute_sweep(const SweepConfig& cfg, const std::filesystem::path& out_dir,
                                    std::optional<int> jobs = std::nullopt);

std::string regime_map_csv(const std::vector<SweepRow>& rows);

/// Recomputes audit.csv from a run directory's manifest.json and
/// snapshots.jsonl. An empty s0 list falls back to the manifest's diag.s0.
std::vector<MomentDiagnostics> audit_run_dir(const std::filesystem::path& run_dir, std::vector<double> s0 = {},
                                             std::optional<double> b = std::nullopt);

/// The config echo stored in manifest.json, as a map.
ConfigMap read_manifest_config(const std::filesystem::path& manifest);

/// "BOUNDED"/"BLOWUP" family of a theorem verdict, empty for NoTheoremApplies.
std::optional<Outcome> verdict_family(Verdict v);

}  // namespace chemolab
