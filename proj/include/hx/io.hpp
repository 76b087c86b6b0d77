#ifndef HX_IO_HPP
#define HX_IO_HPP

#include <string>

#include <json.hpp>

#include "hx/extension.hpp"
#include "hx/grid.hpp"
#include "hx/harness.hpp"
#include "hx/norms.hpp"

namespace hx {

// GridFunction dump: little-endian 64-bit IEEE floats, row-major, plus a JSON
// sidecar {n, N, L, mean, checksum} at <path>.json. The checksum is FNV-1a 64
// of the payload bytes, hex-encoded. CSV alternative for n = 1 (x,value with
// 17 significant digits).
void dump_grid_function(const GridFunction& f, const std::string& path);
GridFunction load_grid_function(const std::string& path);
void dump_grid_function_csv(const GridFunction& f, const std::string& path);

/// One GridFunction file per level plus manifest.json {s, tgrid, files}.
void dump_extension(const ExtensionField& E, const std::string& dir);

nlohmann::json config_to_json(const TrialConfig& cfg);
TrialConfig config_from_json(const nlohmann::json& j);
TrialConfig load_config(const std::string& path);

nlohmann::json report_to_json(const EstimateReport& rep);
nlohmann::json identity_report_to_json(const TrialConfig& cfg, const std::vector<IdentityResult>& ids);
nlohmann::json trace_report_to_json(const TrialConfig& cfg, const std::vector<TraceResult>& res);
nlohmann::json norm_report_to_json(const NormReport& rep);

/// trial,seed,lhs,rhs,ratio rows (fixed column order).
std::string report_csv(const EstimateReport& rep);

/// Deterministic serialization (sorted keys, shortest round-trip floats).
void write_json(const nlohmann::json& j, const std::string& path);
void write_text(const std::string& text, const std::string& path);

} // namespace hx

#endif
