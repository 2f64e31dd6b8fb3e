#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "chemolab/initdata.hpp"
#include "chemolab/model.hpp"
#include "chemolab/state.hpp"

namespace chemolab {

/// A config value: number, string, boolean, or list of numbers.
using ConfigValue = std::variant<double, std::string, bool, std::vector<double>>;

/// Keyed by the dotted name; std::map keeps the echo order stable.
using ConfigMap = std::map<std::string, ConfigValue>;

struct DiagnosticsOptions {
  double sigma_norm = 4.0;
  double b = 0.5;
  std::vector<double> s0;
  int frames = 200;
  double frame_dt = 0.0;
  double eps0 = kDefaultEps0;
  /// <= 0 disables the profile monitor.
  double profile_sigma = 0.0;
};

struct RunConfig {
  ModelParams params;
  DomainSpec domain;
  int N = 256;
  InitialDataSpec init;
  StepControl step;
  DiagnosticsOptions diag;
  bool deterministic = true;
  /// Every key with its resolved value; the echo written to manifest.json.
  ConfigMap resolved;
};

struct SweepAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int count = 2;

  double value(int i) const { return count == 1 ? min : min + (max - min) * i / (count - 1); }
};

struct SweepConfig {
  ConfigMap base;
  std::vector<SweepAxis> axes;
  int jobs = 1;
  /// Number of grid points (product of axis counts).
  int total_runs() const;
};

using LoadedConfig = std::variant<RunConfig, SweepConfig>;

/// Parses the key-value text format:
///
///   # comment
///   domain.n = 3
///   init.kind = "singular"
///   diag.s0 = [0.015625, 0.1]
///   source.enabled = false
///
/// Unknown keys are rejected. Any sweep.* key makes the file a sweep.
ConfigMap parse_config_text(const std::string& text);

LoadedConfig load_config(const std::filesystem::path& path);
LoadedConfig config_from_map(const ConfigMap& map);

/// Applies defaults and validation; throws ValidationError (or the model's
/// own error codes) on bad values.
RunConfig build_run_config(const ConfigMap& map);

/// Config key an axis name overrides, e.g. "p" -> "model.p".
std::string axis_key(const std::string& axis_name);

/// Canonical text rendering of a map (one `key = value` line each, 17
/// significant digits); parse_config_text of it reproduces the map.
std::string render_config(const ConfigMap& map);

/// FNV-1a digest of render_config(resolved), hex.
std::string config_digest(const ConfigMap& resolved);

/// 17 significant digits, "nan"/"inf" for non-finite values.
std::string format_real(double x);

}  // namespace chemolab
