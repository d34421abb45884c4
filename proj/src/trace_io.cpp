#include "hcdr/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "hcdr/errors.hpp"

namespace hcdr {

namespace {

const char* const kStates[10] = {"p_mx", "dp_mx", "p_mz", "dp_mz", "beta_m",
                                 "dbeta_m", "th_a2", "dth_a2", "th_a3", "dth_a3"};
const char* const kInputs[4] = {"u_T3", "u_T4", "u_ta2", "u_ta3"};

std::vector<double> row_of(const SimTrace& tr, std::size_t k) {
  std::vector<double> r;
  r.reserve(60);
  r.push_back(tr.t[k]);
  for (int i = 0; i < 10; ++i) r.push_back(tr.x[k][i]);
  for (int i = 0; i < 12; ++i) r.push_back(tr.T[k][i]);
  r.push_back(tr.L01[k]);
  r.push_back(tr.L02[k]);
  for (int i = 0; i < 4; ++i) r.push_back(tr.u[k][i]);
  r.push_back(tr.pe[k].x());
  r.push_back(tr.pe[k].y());
  r.push_back(tr.KE[k]);
  r.push_back(tr.VE[k]);
  for (int i = 0; i < 10; ++i) r.push_back(tr.x_ref[k][i]);
  for (int i = 0; i < 4; ++i) r.push_back(tr.u_ref[k][i]);
  r.push_back(tr.pe_ref[k].x());
  r.push_back(tr.pe_ref[k].y());
  return r;
}

void check_lengths(const SimTrace& tr) {
  const std::size_t n = tr.t.size();
  if (tr.x.size() != n || tr.u.size() != n || tr.T.size() != n || tr.L01.size() != n || tr.L02.size() != n ||
      tr.KE.size() != n || tr.VE.size() != n || tr.x_ref.size() != n || tr.pe.size() != n ||
      tr.pe_ref.size() != n || tr.u_ref.size() != n)
    throw Error(ErrorCategory::kAlignment, "trace arrays have unequal lengths");
}

}  // namespace

std::vector<std::string> trace_header() {
  std::vector<std::string> h{"t"};
  for (const char* s : kStates) h.emplace_back(s);
  for (int i = 1; i <= 12; ++i) h.push_back("T" + std::to_string(i));
  h.emplace_back("L01");
  h.emplace_back("L02");
  for (const char* s : kInputs) h.emplace_back(s);
  for (const char* s : {"x_e", "z_e", "KE", "VE"}) h.emplace_back(s);
  for (const char* s : kStates) h.push_back(std::string("ref_") + s);
  for (const char* s : kInputs) h.push_back(std::string("ref_") + s);
  h.emplace_back("ref_x_e");
  h.emplace_back("ref_z_e");
  return h;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trace_csv(const SimTrace& trace) {
  check_lengths(trace);
  std::string out;
  const auto header = trace_header();
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    const auto r = row_of(trace, k);
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += format_double(r[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json trace_json(const SimTrace& trace) {
  check_lengths(trace);
  const auto header = trace_header();
  std::vector<std::vector<double>> cols(header.size());
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    const auto r = row_of(trace, k);
    for (std::size_t i = 0; i < r.size(); ++i) cols[i].push_back(r[i]);
  }
  nlohmann::json data = nlohmann::json::object();
  for (std::size_t i = 0; i < header.size(); ++i) data[header[i]] = cols[i];
  return {{"columns", header}, {"data", data}};
}

SimTrace read_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("header", 1, "empty trace file");
  const auto header = trace_header();
  {
    std::string expected;
    for (std::size_t i = 0; i < header.size(); ++i) expected += (i ? "," : "") + header[i];
    if (line != expected) throw ParseError("header", 1, "trace header does not match the documented columns");
  }
  SimTrace tr;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> r;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t end = std::min(line.find(',', pos), line.size());
      const std::string cell = line.substr(pos, end - pos);
      char* stop = nullptr;
      const double v = std::strtod(cell.c_str(), &stop);
      if (cell.empty() || *stop != '\0')
        throw ParseError(r.size() < header.size() ? header[r.size()] : "row", lineno, "malformed number");
      r.push_back(v);
      pos = end + 1;
    }
    if (r.size() != header.size()) throw ParseError("row", lineno, "wrong number of columns");
    std::size_t c = 0;
    auto take = [&](int n) {
      VecX v(n);
      for (int i = 0; i < n; ++i) v[i] = r[c++];
      return v;
    };
    tr.t.push_back(r[c++]);
    tr.x.push_back(take(10));
    tr.T.push_back(take(12));
    tr.L01.push_back(r[c++]);
    tr.L02.push_back(r[c++]);
    tr.u.push_back(take(4));
    tr.pe.emplace_back(r[c], r[c + 1]);
    c += 2;
    tr.KE.push_back(r[c++]);
    tr.VE.push_back(r[c++]);
    tr.x_ref.push_back(take(10));
    tr.u_ref.push_back(take(4));
    tr.pe_ref.emplace_back(r[c], r[c + 1]);
  }
  return tr;
}

nlohmann::json summary_json(const EvalReport& report, std::uint64_t seed, const std::string& config_hash) {
  return {{"rmse_x_m", report.rmse_x},
          {"rmse_z_m", report.rmse_z},
          {"rmse_2d_m", report.rmse_2d},
          {"min_tension_N", report.min_tension},
          {"max_tension_N", report.max_tension},
          {"samples", report.samples},
          {"seed", seed},
          {"config_hash", config_hash}};
}

}  // namespace hcdr
