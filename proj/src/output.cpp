#include "chemolab/output.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "chemolab/config.hpp"

namespace chemolab {

namespace {

void append_row(std::string& out, std::initializer_list<double> values) {
  bool first = true;
  for (double x : values) {
    if (!first) out += ',';
    out += format_real(x);
    first = false;
  }
  out += '\n';
}

void append_array(std::string& out, const FieldXd& values) {
  out += '[';
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_real(values(i));
  }
  out += ']';
}

}  // namespace

std::string timeseries_csv(std::span<const NormTrace> trace) {
  std::string out = std::string(kTimeseriesHeader) + "\n";
  for (const auto& r : trace)
    append_row(out, {r.t, r.linf_u, r.min_u, r.mass_u, r.mass_v, r.mass_w, r.lsigma_u, r.profile_sup, r.dt});
  return out;
}

std::string audit_csv(std::span<const MomentDiagnostics> rows) {
  std::string out = std::string(kAuditHeader) + "\n";
  for (const auto& r : rows)
    append_row(out, {r.t, r.s0, r.b, r.phi, r.dphi_dt, r.J[0], r.J[1], r.J[2], r.J[3], r.J[4], r.J[5], r.margin});
  return out;
}

std::string snapshots_jsonl(std::span<const State> frames, const Grid& grid) {
  std::string out;
  for (const auto& f : frames) {
    out += "{\"t\":" + format_real(f.t) + ",\"r\":";
    append_array(out, grid.centers());
    out += ",\"u\":";
    append_array(out, f.u);
    out += ",\"v\":";
    append_array(out, f.v);
    out += ",\"w\":";
    append_array(out, f.w);
    out += "}\n";
  }
  return out;
}

std::vector<State> read_snapshots_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::vector<State> frames;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
    auto field = [&](const char* key) {
      const auto values = obj.at(key).get<std::vector<double>>();
      return FieldXd(Eigen::Map<const FieldXd>(values.data(), static_cast<Eigen::Index>(values.size())));
    };
    State s;
    s.t = obj.at("t").get<double>();
    s.u = field("u");
    s.v = field("v");
    s.w = field("w");
    frames.push_back(std::move(s));
  }
  return frames;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace chemolab
