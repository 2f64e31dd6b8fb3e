#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "chemolab/diagnostics.hpp"
#include "chemolab/grid.hpp"
#include "chemolab/state.hpp"

namespace chemolab {

inline constexpr const char* kTimeseriesHeader = "t,linf_u,min_u,mass_u,mass_v,mass_w,lsigma_u,profile_sup,dt";
inline constexpr const char* kAuditHeader = "t,s0,b,phi,dphi_dt,J1,J2,J3,J4,J5,J6,margin";
inline constexpr const char* kRegimeMapHeader = "axis1,axis2,predicted,observed,T_detect,agreement";

std::string timeseries_csv(std::span<const NormTrace> trace);
std::string audit_csv(std::span<const MomentDiagnostics> rows);
/// One JSON object per frame: {"t":..,"r":[..],"u":[..],"v":[..],"w":[..]}.
std::string snapshots_jsonl(std::span<const State> frames, const Grid& grid);

/// Reads frames back from snapshots.jsonl; v and w are taken as stored.
std::vector<State> read_snapshots_jsonl(const std::filesystem::path& path);

/// Writes text to path, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace chemolab
