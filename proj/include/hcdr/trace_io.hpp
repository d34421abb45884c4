#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hcdr/metrics.hpp"

namespace hcdr {

/// Column names of the trace CSV, in order:
/// t, the 10 planar states, T1..T12, L01, L02, the 4 applied inputs, x_e,
/// z_e, KE, VE, then ref_ + each state name, ref_u_T3..ref_u_ta3, ref_x_e,
/// ref_z_e.
std::vector<std::string> trace_header();

/// Shortest text that round-trips the double ("%.17g").
std::string format_double(double v);

std::string trace_csv(const SimTrace& trace);
/// Column-major JSON: {"columns": [...], "data": {name: [values]}}.
nlohmann::json trace_json(const SimTrace& trace);

/// Reads a CSV produced by trace_csv. Throws ParseError on a header mismatch
/// or malformed number.
SimTrace read_trace_csv(const std::string& text);

nlohmann::json summary_json(const EvalReport& report, std::uint64_t seed, const std::string& config_hash);

}  // namespace hcdr
