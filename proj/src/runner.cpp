#include "chemolab/runner.hpp"

#include <atomic>
#include <chrono>
#include <json.hpp>
#include <thread>

#include "chemolab/output.hpp"

namespace chemolab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json config_to_json(const ConfigMap& map) {
  json obj = json::object();
  for (const auto& [key, value] : map) {
    std::visit([&](const auto& v) { obj[key] = v; }, value);
  }
  return obj;
}

ConfigMap config_from_json(const json& obj) {
  ConfigMap map;
  for (const auto& [key, value] : obj.items()) {
    if (value.is_boolean()) {
      map[key] = value.get<bool>();
    } else if (value.is_number()) {
      map[key] = value.get<double>();
    } else if (value.is_string()) {
      map[key] = value.get<std::string>();
    } else if (value.is_array()) {
      map[key] = value.get<std::vector<double>>();
    } else {
      throw Error(ErrorCode::ParseError, "manifest config key " + key + " has an unsupported type");
    }
  }
  return map;
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json prediction_json(const RegimePrediction& p) {
  return {{"verdict", to_string(p.verdict)},
          {"condition_case", p.condition_case ? json(to_string(*p.condition_case)) : json(nullptr)},
          {"kappa_bound", optional_number(p.kappa_bound)},
          {"sigma_exponent", optional_number(p.sigma_exponent)},
          {"details", p.details}};
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorCode::IoError, "cannot create " + dir.string());
}

}  // namespace

std::optional<Outcome> verdict_family(Verdict v) {
  switch (v) {
    case Verdict::BoundedThm31:
    case Verdict::BoundedThm33: return Outcome::Bounded;
    case Verdict::BlowupThm41:
    case Verdict::BlowupThm44: return Outcome::Blowup;
    case Verdict::NoTheoremApplies: return std::nullopt;
  }
  return std::nullopt;
}

Simulation simulate(const RunConfig& cfg, std::function<void(const State&)> on_step) {
  const auto vp = validate_params(cfg.params, cfg.domain);
  Simulation sim{build_grid(cfg.domain.n, cfg.domain.R, cfg.N), {}, {}, {}};
  sim.initial = make_initial(cfg.init, sim.grid);

  RunOptions opts;
  opts.frames = cfg.diag.frames;
  opts.frame_dt = cfg.diag.frame_dt;
  opts.sigma_norm = cfg.diag.sigma_norm;
  opts.profile_sigma = cfg.diag.profile_sigma;
  opts.keep_frames = true;
  opts.on_step = std::move(on_step);
  sim.trajectory = run(vp, sim.grid, sim.initial.u0, cfg.step, opts);

  for (double s0 : cfg.diag.s0) {
    auto rows = audit_frames(sim.trajectory.frames, cfg.params, sim.grid, s0, cfg.diag.b);
    sim.audit.insert(sim.audit.end(), rows.begin(), rows.end());
  }
  return sim;
}

RunRecord execute_run(const RunConfig& cfg, const fs::path& out_dir, std::function<void(const State&)> on_step) {
  const auto started = std::chrono::steady_clock::now();
  ensure_directory(out_dir);

  RunRecord rec;
  rec.config_digest = config_digest(cfg.resolved);
  rec.prediction = predict_regime(cfg.params, cfg.domain, cfg.diag.eps0);

  const Simulation sim = simulate(cfg, std::move(on_step));
  const auto& traj = sim.trajectory;
  rec.classification = traj.outcome;
  rec.termination = traj.termination;
  rec.T_detect = traj.T_detect;
  rec.T_star_estimate = traj.T_star_estimate;
  rec.final_norms = traj.trace.back();

  const auto timeseries = out_dir / "timeseries.csv";
  write_text_file(timeseries, timeseries_csv(traj.trace));
  rec.files.push_back(timeseries);
  const auto snapshots = out_dir / "snapshots.jsonl";
  write_text_file(snapshots, snapshots_jsonl(traj.frames, sim.grid));
  rec.files.push_back(snapshots);
  if (!cfg.diag.s0.empty()) {
    const auto audit = out_dir / "audit.csv";
    write_text_file(audit, audit_csv(sim.audit));
    rec.files.push_back(audit);
  }
  const auto manifest = out_dir / "manifest.json";
  rec.files.push_back(manifest);
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  const auto& fn = rec.final_norms;
  json files = json::array();
  for (const auto& f : rec.files) files.push_back(f.filename().string());
  json doc = {
      {"config", config_to_json(cfg.resolved)},
      {"record",
       {{"config_digest", rec.config_digest},
        {"classification", to_string(rec.classification)},
        {"termination", to_string(rec.termination)},
        {"T_detect", optional_number(rec.T_detect)},
        {"T_star_estimate", optional_number(rec.T_star_estimate)},
        {"final_norms",
         {{"t", fn.t}, {"linf_u", fn.linf_u}, {"min_u", fn.min_u}, {"mass_u", fn.mass_u}, {"mass_v", fn.mass_v},
          {"mass_w", fn.mass_w}, {"lsigma_u", fn.lsigma_u}, {"profile_sup", fn.profile_sup}}},
        {"steps", traj.final_state.steps},
        {"prediction", prediction_json(rec.prediction)},
        {"initial",
         {{"actual_mass", sim.initial.actual_mass},
          {"mass_in_r1", sim.initial.mass_in_r1},
          {"profile_bound_L", optional_number(sim.initial.profile_bound_L)}}},
        {"files", files},
        {"wall_seconds", rec.wall_seconds}}},
  };
  write_text_file(manifest, doc.dump(2) + "\n");
  return rec;
}

std::string regime_map_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kRegimeMapHeader) + "\n";
  for (const auto& r : rows) {
    out += format_real(r.axis1) + ",";
    out += (r.axis2 ? format_real(*r.axis2) : std::string()) + ",";
    out += std::string(to_string(r.predicted)) + ",";
    out += r.observed + ",";
    out += (r.T_detect ? format_real(*r.T_detect) : std::string()) + ",";
    out += r.agreement ? (*r.agreement ? "true" : "false") : "na";
    out += "\n";
  }
  return out;
}

std::vector<SweepRow> execute_sweep(const SweepConfig& cfg, const fs::path& out_dir, std::optional<int> jobs) {
  ensure_directory(out_dir);
  const int total = cfg.total_runs();
  const int workers = std::max(1, std::min(jobs.value_or(cfg.jobs), total));

  std::vector<SweepRow> rows(total);
  std::atomic<int> next{0};

  auto work = [&]() {
    for (int idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
      SweepRow& row = rows[idx];
      ConfigMap point = cfg.base;
      const int count2 = cfg.axes.size() > 1 ? cfg.axes[1].count : 1;
      const int i1 = idx / count2;
      row.axis1 = cfg.axes[0].value(i1);
      point[axis_key(cfg.axes[0].name)] = row.axis1;
      if (cfg.axes.size() > 1) {
        row.axis2 = cfg.axes[1].value(idx % count2);
        point[axis_key(cfg.axes[1].name)] = *row.axis2;
      }
      char name[32];
      std::snprintf(name, sizeof name, "run_%04d", idx);
      try {
        const RunConfig rc = build_run_config(point);
        row.predicted = predict_regime(rc.params, rc.domain, rc.diag.eps0).verdict;
        const RunRecord rec = execute_run(rc, out_dir / name);
        row.observed = to_string(rec.classification);
        row.T_detect = rec.T_detect;
        const auto family = verdict_family(row.predicted);
        if (family && rec.classification != Outcome::Inconclusive) row.agreement = *family == rec.classification;
      } catch (const std::exception& e) {
        row.observed = "ERROR";
        row.error = e.what();
      }
    }
  };

  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  write_text_file(out_dir / "regime_map.csv", regime_map_csv(rows));
  return rows;
}

ConfigMap read_manifest_config(const fs::path& manifest) {
  json doc;
  try {
    doc = json::parse(read_text_file(manifest));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, manifest.string() + ": " + e.what());
  }
  if (!doc.contains("config")) throw Error(ErrorCode::ParseError, manifest.string() + ": no config echo");
  return config_from_json(doc.at("config"));
}

std::vector<MomentDiagnostics> audit_run_dir(const fs::path& run_dir, std::vector<double> s0, std::optional<double> b) {
  const RunConfig cfg = build_run_config(read_manifest_config(run_dir / "manifest.json"));
  if (s0.empty()) s0 = cfg.diag.s0;
  if (s0.empty()) throw Error(ErrorCode::ValidationError, "no s0 given and none in the manifest");
  const double bb = b.value_or(cfg.diag.b);
  const Grid grid = build_grid(cfg.domain.n, cfg.domain.R, cfg.N);
  const auto frames = read_snapshots_jsonl(run_dir / "snapshots.jsonl");
  for (const auto& f : frames)
    if (f.u.size() != grid.cells()) throw Error(ErrorCode::LengthMismatch, "snapshot does not match grid.N");
  std::vector<MomentDiagnostics> out;
  for (double s : s0) {
    auto rows = audit_frames(frames, cfg.params, grid, s, bb);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

}  // namespace chemolab
