#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>

#include "chemolab/config.hpp"
#include "chemolab/output.hpp"
#include "chemolab/runner.hpp"
#include "chemolab/verify.hpp"

using namespace chemolab;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::StepCollapse:
    case ErrorCode::SingularSystem:
    case ErrorCode::IoError:
    case ErrorCode::EmptyTrace:
      return kExitRuntime;
    default:
      return kExitValidation;
  }
}

// 7/6 rather than 1.1666666666666667 when a small denominator fits
std::string pretty_bound(double x) {
  for (int den = 1; den <= 64; ++den) {
    const double num = std::round(x * den);
    if (std::abs(x * den - num) < 1e-9 * den) {
      if (den == 1) return std::to_string(static_cast<long long>(num));
      return std::to_string(static_cast<long long>(num)) + "/" + std::to_string(den);
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void print_prediction(const RegimePrediction& pred) {
  std::cout << to_string(pred.verdict);
  if (pred.verdict == Verdict::BlowupThm41 || pred.verdict == Verdict::BlowupThm44)
    std::cout << " (κ < " << pretty_bound(*pred.kappa_bound) << ")";
  std::cout << "\n";
  std::cout << "  condition case: " << (pred.condition_case ? to_string(*pred.condition_case) : "none") << "\n";
  if (pred.kappa_bound) std::cout << "  kappa bound: " << format_real(*pred.kappa_bound) << "\n";
  if (pred.sigma_exponent) std::cout << "  sigma exponent: " << format_real(*pred.sigma_exponent) << "\n";
  std::cout << "  " << pred.details << "\n";
}

int cmd_check(const std::string& path) {
  const LoadedConfig loaded = load_config(path);
  if (const auto* rc = std::get_if<RunConfig>(&loaded)) {
    print_prediction(predict_regime(rc->params, rc->domain, rc->diag.eps0));
    return kExitOk;
  }
  const auto& sc = std::get<SweepConfig>(loaded);
  const int count2 = sc.axes.size() > 1 ? sc.axes[1].count : 1;
  for (int idx = 0; idx < sc.total_runs(); ++idx) {
    ConfigMap point = sc.base;
    point[axis_key(sc.axes[0].name)] = sc.axes[0].value(idx / count2);
    std::cout << sc.axes[0].name << "=" << format_real(sc.axes[0].value(idx / count2));
    if (sc.axes.size() > 1) {
      point[axis_key(sc.axes[1].name)] = sc.axes[1].value(idx % count2);
      std::cout << " " << sc.axes[1].name << "=" << format_real(sc.axes[1].value(idx % count2));
    }
    std::cout << ": ";
    const RunConfig rc = build_run_config(point);
    print_prediction(predict_regime(rc.params, rc.domain, rc.diag.eps0));
  }
  return kExitOk;
}

int cmd_run(const std::string& path, const std::string& out) {
  const LoadedConfig loaded = load_config(path);
  const auto* rc = std::get_if<RunConfig>(&loaded);
  if (!rc) throw Error(ErrorCode::ValidationError, "config describes a sweep; use the sweep subcommand");
  const RunRecord rec = execute_run(*rc, out);
  std::cout << "classification: " << to_string(rec.classification) << "\n";
  std::cout << "termination: " << to_string(rec.termination) << "\n";
  if (rec.T_detect) std::cout << "T_detect: " << format_real(*rec.T_detect) << "\n";
  if (rec.T_star_estimate) std::cout << "T_star_estimate: " << format_real(*rec.T_star_estimate) << "\n";
  std::cout << "predicted: " << to_string(rec.prediction.verdict) << "\n";
  std::cout << "final linf_u: " << format_real(rec.final_norms.linf_u) << " at t = " << format_real(rec.final_norms.t)
            << "\n";
  std::cout << "wall seconds: " << rec.wall_seconds << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& path, const std::string& out, std::optional<int> jobs) {
  const LoadedConfig loaded = load_config(path);
  const auto* sc = std::get_if<SweepConfig>(&loaded);
  if (!sc) throw Error(ErrorCode::ValidationError, "config has no sweep axes; use the run subcommand");
  const auto rows = execute_sweep(*sc, out, jobs);
  int agree = 0, disagree = 0, errors = 0;
  for (const auto& r : rows) {
    if (r.observed == "ERROR") {
      ++errors;
      std::cerr << "run at axis1=" << format_real(r.axis1) << " failed: " << r.error << "\n";
    }
    if (r.agreement) (*r.agreement ? agree : disagree)++;
  }
  std::cout << rows.size() << " runs, " << agree << " agree, " << disagree << " disagree, " << errors << " errors\n";
  std::cout << "wrote " << (fs::path(out) / "regime_map.csv").string() << "\n";
  return kExitOk;
}

int cmd_audit(const std::string& run_dir, const std::string& out, const std::vector<double>& s0,
              std::optional<double> b) {
  const auto rows = audit_run_dir(run_dir, s0, b);
  const fs::path target = out.empty() ? fs::path(run_dir) / "audit.csv" : fs::path(out);
  write_text_file(target, audit_csv(rows));
  double worst = INFINITY;
  for (const auto& r : rows)
    if (std::isfinite(r.margin)) worst = std::min(worst, r.margin);
  std::cout << rows.size() << " audit rows, min margin " << format_real(worst) << "\n";
  std::cout << "wrote " << target.string() << "\n";
  return kExitOk;
}

int cmd_verify() {
  bool ok = true;
  for (const auto& c : run_verification_suite()) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    ok = ok && c.passed;
  }
  return ok ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chemolab: radial attraction-repulsion chemotaxis simulator"};
  app.require_subcommand(1);

  std::string config, out, run_dir;
  std::optional<int> jobs;
  std::vector<double> s0;
  std::optional<double> b;

  auto* check = app.add_subcommand("check", "print the regime prediction for a config");
  check->add_option("--config", config, "config file")->required();

  auto* run = app.add_subcommand("run", "run one scenario");
  run->add_option("--config", config, "config file")->required();
  run->add_option("--out", out, "output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  sweep->add_option("--config", config, "config file")->required();
  sweep->add_option("--out", out, "output directory")->required();
  sweep->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);

  auto* audit = app.add_subcommand("audit", "recompute the moment audit from stored snapshots");
  audit->add_option("--run", run_dir, "run directory")->required();
  audit->add_option("--out", out, "audit.csv path (default: <run>/audit.csv)");
  audit->add_option("--s0", s0, "window sizes");
  audit->add_option("--b", b, "moment exponent");

  auto* verify = app.add_subcommand("verify", "run the built-in verification suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(config);
    if (run->parsed()) return cmd_run(config, out);
    if (sweep->parsed()) return cmd_sweep(config, out, jobs);
    if (audit->parsed()) return cmd_audit(run_dir, out, s0, b);
    if (verify->parsed()) return cmd_verify();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
