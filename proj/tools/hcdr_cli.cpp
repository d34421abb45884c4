// hcdr: scenario runner and plot-ready data emitter.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcdr/errors.hpp"
#include "hcdr/json_util.hpp"
#include "hcdr/metrics.hpp"
#include "hcdr/model.hpp"
#include "hcdr/redundancy.hpp"
#include "hcdr/scenario.hpp"
#include "hcdr/sim.hpp"
#include "hcdr/stiffness.hpp"
#include "hcdr/trace_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hcdr;

namespace {

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kParse: return 2;
    case ErrorCategory::kValidation: return 3;
    case ErrorCategory::kArgument: return 4;
    case ErrorCategory::kIo: return 5;
    case ErrorCategory::kComparison: return 6;
    case ErrorCategory::kInfeasible: return 7;
    case ErrorCategory::kIterationLimit: return 8;
    case ErrorCategory::kDivergence: return 9;
    default: return 10;
  }
}

int report_error(std::string_view category, const std::string& message, int code) {
  const json j = {{"error", {{"category", std::string(category)}, {"message", message}}}};
  std::cerr << j.dump() << "\n";
  return code;
}

struct Common {
  std::string model;
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string format = "csv";
};

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCategory::kIo, "cannot create directory '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

Scenario scenario_from(const Common& c) {
  Scenario s;
  if (!c.scenario.empty()) {
    s = load_scenario_file(c.scenario);
  } else {
    s.config = default_config(Architecture::kIntegratedII);
    s.waypoints = case_study_trajectory().waypoints();
    s.model = builtin_hcdr9dof();
  }
  if (!c.model.empty()) {
    s.model_ref = c.model;
    s.model = resolve_model(c.model);
  }
  if (c.seed) s.config.seed = *c.seed;
  return s;
}

std::string csv_line(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out + "\n";
}

std::string csv_header(const std::vector<std::string>& h) {
  std::string out;
  for (std::size_t i = 0; i < h.size(); ++i) out += (i ? "," : "") + h[i];
  return out + "\n";
}

// Writes a table as CSV or as a column-major JSON document.
void write_table(const std::string& dir, const std::string& stem, const std::string& format,
                 const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  if (format == "json") {
    json data = json::object();
    for (std::size_t c = 0; c < header.size(); ++c) {
      json col = json::array();
      for (const auto& r : rows) col.push_back(r[c]);
      data[header[c]] = col;
    }
    write_text_file(join(dir, stem + ".json"), json{{"columns", header}, {"data", data}}.dump(2) + "\n");
  } else {
    std::string text = csv_header(header);
    for (const auto& r : rows) text += csv_line(r);
    write_text_file(join(dir, stem + ".csv"), text);
  }
}

struct RunResult {
  EvalReport report;
  json summary;
};

RunResult run(const Scenario& s, const std::string& dir, const std::string& format) {
  const SimTrace tr = simulate(s.model, scenario_trajectory(s), s.config);
  RunResult r;
  r.report = evaluate_trace(tr);
  r.summary = summary_json(r.report, s.config.seed, config_hash(s));
  r.summary["architecture"] = architecture_name(s.config.architecture);
  r.summary["config"] = canonical_config(s);
  ensure_dir(dir);
  if (format == "json")
    write_text_file(join(dir, s.trace_name + ".json"), trace_json(tr).dump() + "\n");
  else
    write_text_file(join(dir, s.trace_name + ".csv"), trace_csv(tr));
  write_text_file(join(dir, s.summary_name + ".json"), r.summary.dump(2) + "\n");
  return r;
}

int cmd_simulate(const Common& c) {
  if (c.scenario.empty()) throw ArgumentError("simulate needs --scenario");
  const RunResult r = run(scenario_from(c), c.out_dir, c.format);
  json brief = r.summary;
  brief.erase("config");
  std::cout << brief.dump(2) << "\n";
  return 0;
}

struct StiffnessArgs {
  double px = 0.0, pz = 0.0, L01 = 1.005, L02 = 1.005;
  int resolution = 76;
};

int cmd_optimize_stiffness(const Common& c, const StiffnessArgs& a) {
  const RobotModel m = c.model.empty() ? builtin_hcdr9dof() : resolve_model(c.model);
  if (a.resolution < 2) throw ArgumentError("--resolution must be at least 2");
  Pose pose;
  pose.p = Vec3(a.px, 0.0, a.pz);
  const auto grid = stiffness_map(m, pose, a.L01, a.L02, a.resolution);
  std::vector<std::vector<double>> rows;
  const StiffnessMapPoint* best = &grid.front();
  double min_eig = grid.front().min_eig;
  for (const auto& p : grid) {
    rows.push_back({p.T3, p.T4, p.JK, p.min_eig});
    if (p.JK > best->JK) best = &p;
    min_eig = std::min(min_eig, p.min_eig);
  }
  ensure_dir(c.out_dir);
  write_table(c.out_dir, "stiffness_map", c.format, {"T3", "T4", "J_K", "min_eig"}, rows);
  const json summary = {{"argmax_T3_N", best->T3},  {"argmax_T4_N", best->T4}, {"max_J_K", best->JK},
                        {"min_eigenvalue", min_eig}, {"L01_m", a.L01},        {"L02_m", a.L02},
                        {"p_mx_m", a.px},            {"p_mz_m", a.pz},        {"resolution", a.resolution}};
  write_text_file(join(c.out_dir, "stiffness_summary.json"), summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_inverse_dynamics(const Common& c) {
  const Scenario s = scenario_from(c);
  const PlanarPlant coupled(s.model);
  const PlanarPlant platform(platform_only(s.model));
  const Trajectory traj = scenario_trajectory(s);
  const double Ts = s.config.mpc.Ts;
  const int K = static_cast<int>(std::llround(s.config.t_end / Ts));
  std::vector<std::string> header{"t"};
  for (int i = 1; i <= s.model.dof(); ++i) header.push_back("tau_" + std::to_string(i));
  for (int i = 1; i <= s.model.num_cables(); ++i) header.push_back("T" + std::to_string(i));
  for (const char* n : {"L01", "L02", "T3_opt", "T4_opt"}) header.emplace_back(n);
  std::vector<std::vector<double>> rows;
  for (int k = 0; k <= K; ++k) {
    const double t = k * Ts;
    const TrajectorySample smp = traj.sample(t);
    VecX q = VecX::Zero(9), qd = VecX::Zero(9), qdd = VecX::Zero(9);
    q << smp.x[0], 0, smp.x[2], 0, smp.x[4], 0, 0, smp.x[6], smp.x[8];
    qd << smp.x[1], 0, smp.x[3], 0, smp.x[5], 0, 0, smp.x[7], smp.x[9];
    qdd << smp.acc[0], 0, smp.acc[1], 0, smp.acc[2], 0, 0, smp.acc[3], smp.acc[4];
    const VecX tau = inverse_dynamics(s.model, q, qd, qdd);
    const ReferencePoint r = reference_point(coupled, platform, traj, t, false, s.config.stiffness);
    std::vector<double> row{t};
    for (int i = 0; i < tau.size(); ++i) row.push_back(tau[i]);
    for (int i = 0; i < r.tensions.size(); ++i) row.push_back(r.tensions[i]);
    row.insert(row.end(), {r.L01, r.L02, r.u[0], r.u[1]});
    rows.push_back(row);
  }
  ensure_dir(c.out_dir);
  write_table(c.out_dir, "inverse_dynamics", c.format, header, rows);
  std::cout << json{{"samples", rows.size()}, {"Ts_s", Ts}}.dump() << "\n";
  return 0;
}

json matrix_rows(const MatX& m) {
  json a = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    a.push_back(row);
  }
  return a;
}

int cmd_linearize(const Common& c, double t) {
  const Scenario s = scenario_from(c);
  const PlanarPlant coupled(s.model);
  const PlanarPlant platform(platform_only(s.model));
  const Trajectory traj = scenario_trajectory(s);
  const ReferencePoint r = reference_point(coupled, platform, traj, t, false, s.config.stiffness);
  const PlantFn f = [&](const VecX& x, const VecX& u) { return coupled.derivative(x, u, r.L01, r.L02); };
  const LtvModel lin = linearize(f, r.x, r.u);
  const DiscreteLtv d = discretize(lin.A, lin.B, s.config.mpc.Ts);
  ensure_dir(c.out_dir);
  if (c.format == "json") {
    const json j = {{"t_s", t},
                    {"Ts_s", s.config.mpc.Ts},
                    {"L01_m", r.L01},
                    {"L02_m", r.L02},
                    {"x_ref", std::vector<double>(r.x.data(), r.x.data() + r.x.size())},
                    {"u_ref", std::vector<double>(r.u.data(), r.u.data() + r.u.size())},
                    {"A", matrix_rows(lin.A)},
                    {"B", matrix_rows(lin.B)},
                    {"Ad", matrix_rows(d.Ad)},
                    {"Bd", matrix_rows(d.Bd)}};
    write_text_file(join(c.out_dir, "linearization.json"), j.dump(2) + "\n");
  } else {
    // Long format: matrix, row, col, value.
    std::string text = "matrix,row,col,value\n";
    const std::pair<const char*, const MatX*> mats[] = {{"A", &lin.A}, {"B", &lin.B}, {"Ad", &d.Ad}, {"Bd", &d.Bd}};
    for (const auto& [name, m] : mats)
      for (int i = 0; i < m->rows(); ++i)
        for (int k = 0; k < m->cols(); ++k)
          text += std::string(name) + "," + std::to_string(i) + "," + std::to_string(k) + "," +
                  format_double((*m)(i, k)) + "\n";
    write_text_file(join(c.out_dir, "linearization.csv"), text);
  }
  std::cout << json{{"t_s", t}, {"states", lin.A.rows()}, {"inputs", lin.B.cols()}}.dump() << "\n";
  return 0;
}

int cmd_evaluate(const Common& c, const std::string& trace_path) {
  if (trace_path.empty()) throw ArgumentError("evaluate needs --trace");
  const EvalReport r = evaluate_trace(read_trace_csv(read_text_file(trace_path)));
  const json j = {{"rmse_x_m", r.rmse_x},           {"rmse_z_m", r.rmse_z},
                  {"rmse_2d_m", r.rmse_2d},         {"min_tension_N", r.min_tension},
                  {"max_tension_N", r.max_tension}, {"samples", r.samples}};
  ensure_dir(c.out_dir);
  write_text_file(join(c.out_dir, "evaluation.json"), j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_compare(const Common& c, const std::vector<std::string>& paths) {
  if (paths.empty()) throw ArgumentError("compare needs --scenario for each run");
  std::vector<Scenario> runs;
  for (const auto& p : paths) {
    Common one = c;
    one.scenario = p;
    runs.push_back(scenario_from(one));
  }
  const json key = comparison_key(runs.front());
  bool identical = true;
  for (const Scenario& s : runs) {
    if (comparison_key(s) != key)
      throw Error(ErrorCategory::kComparison, "scenarios differ in more than the architecture");
    identical = identical && canonical_config(s) == canonical_config(runs.front());
  }
  if (!identical) {
    std::set<Architecture> present;
    for (const Scenario& s : runs) {
      if (!present.insert(s.config.architecture).second)
        throw Error(ErrorCategory::kComparison,
                    "architecture '" + architecture_name(s.config.architecture) + "' appears more than once");
    }
    std::string missing;
    for (Architecture a : {Architecture::kIndependent, Architecture::kIntegratedI, Architecture::kIntegratedII})
      if (!present.count(a)) missing += (missing.empty() ? "" : ", ") + architecture_name(a);
    if (!missing.empty()) throw Error(ErrorCategory::kComparison, "missing architecture run(s): " + missing);
  }

  struct Row {
    std::string arch;
    EvalReport r;
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string name = architecture_name(runs[i].config.architecture);
    const std::string dir = join(c.out_dir, "run" + std::to_string(i + 1) + "_" + name);
    rows.push_back({name, run(runs[i], dir, c.format).report});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.r.rmse_2d < b.r.rmse_2d; });

  json table = json::array();
  std::string csv = "rank,architecture,rmse_x_m,rmse_z_m,rmse_2d_m,min_tension_N,max_tension_N\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const EvalReport& r = rows[i].r;
    table.push_back({{"rank", i + 1},
                     {"architecture", rows[i].arch},
                     {"rmse_x_m", r.rmse_x},
                     {"rmse_z_m", r.rmse_z},
                     {"rmse_2d_m", r.rmse_2d},
                     {"min_tension_N", r.min_tension},
                     {"max_tension_N", r.max_tension}});
    csv += std::to_string(i + 1) + "," + rows[i].arch + "," + format_double(r.rmse_x) + "," +
           format_double(r.rmse_z) + "," + format_double(r.rmse_2d) + "," + format_double(r.min_tension) + "," +
           format_double(r.max_tension) + "\n";
  }
  const json out = {{"ordered_by", "rmse_2d_m"}, {"runs", table}};
  ensure_dir(c.out_dir);
  write_text_file(join(c.out_dir, "comparison.json"), out.dump(2) + "\n");
  write_text_file(join(c.out_dir, "comparison.csv"), csv);
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hcdr: hybrid cable-driven robot simulation and analysis"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", common.model, "builtin name (hcdr9dof) or model JSON path");
    sub->add_option("--seed", common.seed, "override the scenario seed");
    sub->add_option("--out-dir", common.out_dir, "directory for artifacts");
    sub->add_option("--format", common.format, "table format")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* sim = app.add_subcommand("simulate", "run one closed-loop scenario");
  add_common(sim);
  sim->add_option("--scenario", common.scenario, "scenario JSON")->required();

  StiffnessArgs sa;
  auto* stiff = app.add_subcommand("optimize-stiffness", "J_K grid over (T3, T4) at a fixed pose");
  add_common(stiff);
  stiff->add_option("--px", sa.px, "platform x (m)");
  stiff->add_option("--pz", sa.pz, "platform z (m)");
  stiff->add_option("--L01", sa.L01, "unstretched length of group 1 (m)");
  stiff->add_option("--L02", sa.L02, "unstretched length of group 2 (m)");
  stiff->add_option("--resolution", sa.resolution, "grid points per axis");

  auto* inv = app.add_subcommand("inverse-dynamics", "torques and tension plan along the reference");
  add_common(inv);
  inv->add_option("--scenario", common.scenario, "scenario JSON (default: case study)");

  double lin_t = 0.0;
  auto* lin = app.add_subcommand("linearize", "10-state LTV model at a reference time");
  add_common(lin);
  lin->add_option("--scenario", common.scenario, "scenario JSON (default: case study)");
  lin->add_option("--t", lin_t, "reference time (s)");

  std::string trace_path;
  auto* eval = app.add_subcommand("evaluate", "RMSE report for a trace CSV");
  add_common(eval);
  eval->add_option("--trace", trace_path, "trace CSV")->required();

  std::vector<std::string> compare_paths;
  auto* cmp = app.add_subcommand("compare", "run and rank scenarios that differ only in architecture");
  add_common(cmp);
  cmp->add_option("--scenario", compare_paths, "scenario JSON (repeat per run)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(category_name(ErrorCategory::kArgument), e.what(), exit_code(ErrorCategory::kArgument));
  }

  try {
    if (sim->parsed()) return cmd_simulate(common);
    if (stiff->parsed()) return cmd_optimize_stiffness(common, sa);
    if (inv->parsed()) return cmd_inverse_dynamics(common);
    if (lin->parsed()) return cmd_linearize(common, lin_t);
    if (eval->parsed()) return cmd_evaluate(common, trace_path);
    if (cmp->parsed()) return cmd_compare(common, compare_paths);
  } catch (const Error& e) {
    return report_error(category_name(e.category()), e.what(), exit_code(e.category()));
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 10);
  }
  return 10;
}
