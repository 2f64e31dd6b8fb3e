#include "chemolab/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "chemolab/grid.hpp"

namespace chemolab {

namespace {

enum class Kind { Number, Integer, String, Bool, NumberList };

const std::map<std::string, Kind>& schema() {
  static const std::map<std::string, Kind> keys = {
      {"domain.n", Kind::Integer},        {"domain.R", Kind::Number},         {"grid.N", Kind::Integer},
      {"model.m", Kind::Number},          {"model.p", Kind::Number},          {"model.q", Kind::Number},
      {"model.chi", Kind::Number},        {"model.xi", Kind::Number},         {"model.alpha", Kind::Number},
      {"model.beta", Kind::Number},       {"model.gamma", Kind::Number},      {"model.delta", Kind::Number},
      {"source.enabled", Kind::Bool},     {"source.lambda0", Kind::Number},   {"source.mu1", Kind::Number},
      {"source.a", Kind::Number},         {"source.kappa", Kind::Number},     {"init.kind", Kind::String},
      {"init.L", Kind::Number},           {"init.sigma", Kind::Number},       {"init.core_radius", Kind::Number},
      {"init.M0", Kind::Number},          {"init.r1", Kind::Number},          {"init.M1", Kind::Number},
      {"step.T", Kind::Number},           {"step.cfl_diff", Kind::Number},    {"step.cfl_adv", Kind::Number},
      {"step.dt_min", Kind::Number},      {"step.u_max_detect", Kind::Number}, {"step.plateau_rate", Kind::Number},
      {"step.max_halvings", Kind::Integer}, {"diag.sigma_norm", Kind::Number}, {"diag.b", Kind::Number},
      {"diag.s0", Kind::NumberList},      {"diag.frames", Kind::Integer},     {"diag.frame_dt", Kind::Number},
      {"diag.eps0", Kind::Number},        {"diag.profile_sigma", Kind::Number}, {"run.deterministic", Kind::Bool},
      {"sweep.jobs", Kind::Integer},      {"sweep.axis1.name", Kind::String}, {"sweep.axis1.min", Kind::Number},
      {"sweep.axis1.max", Kind::Number},  {"sweep.axis1.count", Kind::Integer}, {"sweep.axis2.name", Kind::String},
      {"sweep.axis2.min", Kind::Number},  {"sweep.axis2.max", Kind::Number},  {"sweep.axis2.count", Kind::Integer},
  };
  return keys;
}

[[noreturn]] void parse_fail(int line, int column, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_number(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

ConfigValue parse_value(const std::string& raw, int line, int column) {
  const std::string text = trim(raw);
  if (text.empty()) parse_fail(line, column, "missing value");
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') parse_fail(line, column, "unterminated string");
    return text.substr(1, text.size() - 2);
  }
  if (text == "true") return true;
  if (text == "false") return false;
  if (text.front() == '[') {
    if (text.back() != ']') parse_fail(line, column, "unterminated list");
    std::vector<double> items;
    std::stringstream body(text.substr(1, text.size() - 2));
    std::string item;
    while (std::getline(body, item, ',')) {
      const std::string t = trim(item);
      if (t.empty()) continue;
      double x;
      if (!parse_number(t, x)) parse_fail(line, column, "bad list element \"" + t + "\"");
      items.push_back(x);
    }
    return items;
  }
  double x;
  if (!parse_number(text, x)) parse_fail(line, column, "cannot parse value \"" + text + "\"");
  return x;
}

void check_kind(const std::string& key, const ConfigValue& value) {
  const auto it = schema().find(key);
  if (it == schema().end()) throw Error(ErrorCode::UnknownKey, key);
  const auto bad = [&](const char* expected) {
    throw Error(ErrorCode::ValidationError, key + " must be " + expected);
  };
  switch (it->second) {
    case Kind::Number:
      if (!std::holds_alternative<double>(value)) bad("a number");
      break;
    case Kind::Integer: {
      if (!std::holds_alternative<double>(value)) bad("an integer");
      const double x = std::get<double>(value);
      if (x != std::floor(x) || std::abs(x) > 1e9) bad("an integer");
      break;
    }
    case Kind::String:
      if (!std::holds_alternative<std::string>(value)) bad("a quoted string");
      break;
    case Kind::Bool:
      if (!std::holds_alternative<bool>(value)) bad("true or false");
      break;
    case Kind::NumberList:
      if (!std::holds_alternative<double>(value) && !std::holds_alternative<std::vector<double>>(value))
        bad("a number or a list of numbers");
      break;
  }
}

class Reader {
 public:
  explicit Reader(const ConfigMap& map) : map_(map) {}

  double number(const std::string& key, double fallback) const {
    const auto it = map_.find(key);
    return it == map_.end() ? fallback : std::get<double>(it->second);
  }
  std::optional<double> maybe(const std::string& key) const {
    const auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return std::get<double>(it->second);
  }
  int integer(const std::string& key, int fallback) const { return static_cast<int>(number(key, fallback)); }
  bool flag(const std::string& key, bool fallback) const {
    const auto it = map_.find(key);
    return it == map_.end() ? fallback : std::get<bool>(it->second);
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    const auto it = map_.find(key);
    return it == map_.end() ? fallback : std::get<std::string>(it->second);
  }
  std::vector<double> list(const std::string& key) const {
    const auto it = map_.find(key);
    if (it == map_.end()) return {};
    if (std::holds_alternative<double>(it->second)) return {std::get<double>(it->second)};
    return std::get<std::vector<double>>(it->second);
  }

 private:
  const ConfigMap& map_;
};

bool is_sweep_key(const std::string& key) { return key.rfind("sweep.", 0) == 0; }

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap map;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    // strip comments outside quotes
    bool quoted = false;
    std::size_t cut = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        cut = i;
        break;
      }
    }
    const std::string line = raw.substr(0, cut);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(line_no, 1, "expected `key = value`");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) parse_fail(line_no, 1, "empty key");
    const int value_column = static_cast<int>(eq) + 2;
    ConfigValue value = parse_value(line.substr(eq + 1), line_no, value_column);
    if (!schema().count(key)) throw Error(ErrorCode::UnknownKey, key);
    check_kind(key, value);
    if (map.count(key)) parse_fail(line_no, 1, "duplicate key " + key);
    map.emplace(key, std::move(value));
  }
  return map;
}

std::string axis_key(const std::string& axis_name) {
  static const std::map<std::string, std::string> keys = {
      {"p", "model.p"},         {"q", "model.q"},         {"chi", "model.chi"}, {"xi", "model.xi"},
      {"alpha", "model.alpha"}, {"gamma", "model.gamma"}, {"m", "model.m"},     {"kappa", "source.kappa"},
      {"M0", "init.M0"},
  };
  const auto it = keys.find(axis_name);
  if (it == keys.end()) throw Error(ErrorCode::ValidationError, "unsupported sweep axis \"" + axis_name + "\"");
  return it->second;
}

int SweepConfig::total_runs() const {
  int total = 1;
  for (const auto& axis : axes) total *= axis.count;
  return total;
}

RunConfig build_run_config(const ConfigMap& map) {
  for (const auto& [key, value] : map) {
    check_kind(key, value);
    if (is_sweep_key(key)) throw Error(ErrorCode::ValidationError, key + " is not a run key");
  }
  const Reader in(map);
  RunConfig cfg;

  cfg.domain.n = in.integer("domain.n", 3);
  cfg.domain.R = in.number("domain.R", 1.0);
  cfg.N = in.integer("grid.N", 256);

  auto& prm = cfg.params;
  prm.m = in.number("model.m", 1.0);
  prm.p = in.number("model.p", 2.0);
  prm.q = in.number("model.q", 2.0);
  prm.chi = in.number("model.chi", 1.0);
  prm.xi = in.number("model.xi", 1.0);
  prm.alpha = in.number("model.alpha", 1.0);
  prm.beta = in.number("model.beta", 1.0);
  prm.gamma = in.number("model.gamma", 1.0);
  prm.delta = in.number("model.delta", 1.0);
  prm.source_enabled = in.flag("source.enabled", false);
  prm.lambda0 = in.number("source.lambda0", 0.0);
  prm.mu1 = in.number("source.mu1", 0.0);
  prm.a = in.number("source.a", 0.0);
  prm.kappa = in.number("source.kappa", 1.0);
  try {
    validate_params(prm, cfg.domain);
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, e.what());
  }
  const Grid grid = build_grid(cfg.domain.n, cfg.domain.R, cfg.N);

  cfg.diag.eps0 = in.number("diag.eps0", kDefaultEps0);
  std::optional<double> natural_sigma;
  try {
    natural_sigma = sigma_exponent(cfg.domain.n, prm.m, prm.p, cfg.diag.eps0);
  } catch (const Error&) {
  }

  auto& init = cfg.init;
  init.kind = initial_kind_from_string(in.text("init.kind", "constant"));
  init.L = in.maybe("init.L");
  init.M0 = in.number("init.M0", 1.0);
  init.core_radius = in.number("init.core_radius", 2.0 * grid.dr());
  init.r1 = in.number("init.r1", cfg.domain.R / 4.0);
  init.M1_check = in.maybe("init.M1");
  if (const auto sigma = in.maybe("init.sigma")) {
    init.sigma = *sigma;
  } else if (init.kind == InitialKind::SingularProfile) {
    if (!natural_sigma) throw Error(ErrorCode::ValidationError, "init.sigma is required: (m-p+1)n+1 <= 0");
    init.sigma = *natural_sigma;
  }
  if (!(init.M0 > 0.0)) throw Error(ErrorCode::InfeasibleMass, "init.M0 must be positive");
  if (!(init.r1 > 0.0 && init.r1 <= cfg.domain.R)) throw Error(ErrorCode::ValidationError, "init.r1 must lie in (0, R]");

  auto& st = cfg.step;
  st.T_horizon = in.number("step.T", 1.0);
  st.cfl_diff = in.number("step.cfl_diff", st.cfl_diff);
  st.cfl_adv = in.number("step.cfl_adv", st.cfl_adv);
  st.dt_min = in.number("step.dt_min", st.dt_min);
  st.u_max_detect = in.number("step.u_max_detect", st.u_max_detect);
  st.plateau_rate = in.number("step.plateau_rate", st.plateau_rate);
  st.max_halvings = in.integer("step.max_halvings", st.max_halvings);
  validate_step_control(st);

  auto& dg = cfg.diag;
  dg.sigma_norm = in.number("diag.sigma_norm", cfg.domain.n + 1.0);
  if (!(dg.sigma_norm > cfg.domain.n)) throw Error(ErrorCode::ValidationError, "diag.sigma_norm must exceed n");
  dg.b = in.number("diag.b", 0.5);
  if (!(dg.b > 0.0 && dg.b < 1.0)) throw Error(ErrorCode::ValidationError, "diag.b must lie in (0,1)");
  dg.s0 = in.list("diag.s0");
  const double Rn = std::pow(cfg.domain.R, cfg.domain.n);
  for (double s0 : dg.s0)
    if (!(s0 > 0.0 && s0 < Rn)) throw Error(ErrorCode::ValidationError, "diag.s0 values must lie in (0, R^n)");
  dg.frames = in.integer("diag.frames", 200);
  dg.frame_dt = in.number("diag.frame_dt", 0.0);
  if (dg.frame_dt < 0.0 || (dg.frame_dt == 0.0 && dg.frames < 1))
    throw Error(ErrorCode::ValidationError, "need diag.frames >= 1 or diag.frame_dt > 0");
  if (const auto ps = in.maybe("diag.profile_sigma")) {
    dg.profile_sigma = *ps;
  } else if (init.kind == InitialKind::SingularProfile) {
    dg.profile_sigma = init.sigma;
  } else {
    dg.profile_sigma = natural_sigma.value_or(0.0);
  }

  cfg.deterministic = in.flag("run.deterministic", true);

  // resolved echo
  auto& r = cfg.resolved;
  r["domain.n"] = double(cfg.domain.n);
  r["domain.R"] = cfg.domain.R;
  r["grid.N"] = double(cfg.N);
  r["model.m"] = prm.m;
  r["model.p"] = prm.p;
  r["model.q"] = prm.q;
  r["model.chi"] = prm.chi;
  r["model.xi"] = prm.xi;
  r["model.alpha"] = prm.alpha;
  r["model.beta"] = prm.beta;
  r["model.gamma"] = prm.gamma;
  r["model.delta"] = prm.delta;
  r["source.enabled"] = prm.source_enabled;
  r["source.lambda0"] = prm.lambda0;
  r["source.mu1"] = prm.mu1;
  r["source.a"] = prm.a;
  r["source.kappa"] = prm.kappa;
  r["init.kind"] = std::string(to_string(init.kind));
  if (init.L) r["init.L"] = *init.L;
  r["init.sigma"] = init.sigma;
  r["init.core_radius"] = init.core_radius;
  r["init.M0"] = init.M0;
  r["init.r1"] = init.r1;
  if (init.M1_check) r["init.M1"] = *init.M1_check;
  r["step.T"] = st.T_horizon;
  r["step.cfl_diff"] = st.cfl_diff;
  r["step.cfl_adv"] = st.cfl_adv;
  r["step.dt_min"] = st.dt_min;
  r["step.u_max_detect"] = st.u_max_detect;
  r["step.plateau_rate"] = st.plateau_rate;
  r["step.max_halvings"] = double(st.max_halvings);
  r["diag.sigma_norm"] = dg.sigma_norm;
  r["diag.b"] = dg.b;
  if (!dg.s0.empty()) r["diag.s0"] = dg.s0;
  r["diag.frames"] = double(dg.frames);
  r["diag.frame_dt"] = dg.frame_dt;
  r["diag.eps0"] = dg.eps0;
  r["diag.profile_sigma"] = dg.profile_sigma;
  r["run.deterministic"] = cfg.deterministic;
  return cfg;
}

LoadedConfig config_from_map(const ConfigMap& map) {
  bool sweep = false;
  for (const auto& [key, value] : map) {
    check_kind(key, value);
    sweep = sweep || is_sweep_key(key);
  }
  if (!sweep) return build_run_config(map);

  SweepConfig out;
  const Reader in(map);
  for (const auto& [key, value] : map)
    if (!is_sweep_key(key)) out.base.emplace(key, value);
  out.jobs = in.integer("sweep.jobs", 1);
  if (out.jobs < 1) throw Error(ErrorCode::ValidationError, "sweep.jobs must be >= 1");
  for (const char* prefix : {"sweep.axis1.", "sweep.axis2."}) {
    const std::string p(prefix);
    if (!map.count(p + "name")) continue;
    SweepAxis axis;
    axis.name = in.text(p + "name", "");
    axis_key(axis.name);
    axis.min = in.number(p + "min", 0.0);
    axis.max = in.number(p + "max", axis.min);
    axis.count = in.integer(p + "count", 2);
    if (axis.count < 2) throw Error(ErrorCode::ValidationError, p + "count must be >= 2");
    out.axes.push_back(axis);
  }
  if (out.axes.empty()) throw Error(ErrorCode::ValidationError, "a sweep needs sweep.axis1.name");
  if (out.axes.size() == 2 && out.axes[0].name == out.axes[1].name)
    throw Error(ErrorCode::ValidationError, "sweep axes must differ");
  // validates the base point with each axis at its minimum
  ConfigMap probe = out.base;
  for (const auto& axis : out.axes) probe[axis_key(axis.name)] = axis.min;
  build_run_config(probe);
  return out;
}

LoadedConfig load_config(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::ValidationError, "cannot read config " + path.string());
  std::stringstream buf;
  buf << file.rdbuf();
  return config_from_map(parse_config_text(buf.str()));
}

std::string render_config(const ConfigMap& map) {
  std::string out;
  for (const auto& [key, value] : map) {
    out += key + " = ";
    if (const auto* x = std::get_if<double>(&value)) {
      out += format_real(*x);
    } else if (const auto* s = std::get_if<std::string>(&value)) {
      out += "\"" + *s + "\"";
    } else if (const auto* b = std::get_if<bool>(&value)) {
      out += *b ? "true" : "false";
    } else {
      const auto& list = std::get<std::vector<double>>(value);
      out += "[";
      for (std::size_t i = 0; i < list.size(); ++i) out += (i ? ", " : "") + format_real(list[i]);
      out += "]";
    }
    out += "\n";
  }
  return out;
}

std::string config_digest(const ConfigMap& resolved) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : render_config(resolved)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace chemolab
