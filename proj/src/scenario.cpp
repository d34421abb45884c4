#include "hcdr/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <set>

#include "hcdr/errors.hpp"
#include "hcdr/json_util.hpp"

namespace hcdr {

namespace {

using nlohmann::json;
constexpr double kInf = std::numeric_limits<double>::infinity();

void reject_unknown(const JsonDoc& doc, const json& obj, const std::string& pointer,
                    const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw doc.error(pointer + "/" + it.key(), "unknown field");
}

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::string read_string(const JsonDoc& doc, const json& j, const std::string& pointer) {
  if (!j.is_string()) throw doc.error(pointer, "expected a string");
  return j.get<std::string>();
}

int read_int(const JsonDoc& doc, const json& j, const std::string& pointer) {
  if (!j.is_number_integer()) throw doc.error(pointer, "expected an integer");
  return j.get<int>();
}

// Array of numbers; null entries become `null_value`.
VecX read_vector(const JsonDoc& doc, const json& j, const std::string& pointer, int size, double null_value) {
  if (!j.is_array() || static_cast<int>(j.size()) != size)
    throw doc.error(pointer, "expected an array of " + std::to_string(size) + " entries");
  VecX v(size);
  for (int k = 0; k < size; ++k) {
    const std::string p = pointer + "/" + std::to_string(k);
    v[k] = j[k].is_null() ? null_value : doc.number(j[k], p);
  }
  return v;
}

json vector_json(const VecX& v) {
  json a = json::array();
  for (int k = 0; k < v.size(); ++k) {
    if (std::isfinite(v[k]))
      a.push_back(v[k]);
    else
      a.push_back(nullptr);
  }
  return a;
}

json matrix_json(const MatX& m) {
  json a = json::array();
  for (int r = 0; r < m.rows(); ++r) a.push_back(vector_json(m.row(r).transpose()));
  return a;
}

void read_mpc(const JsonDoc& doc, const json& j, MpcParams& p) {
  const std::string ptr = "/mpc";
  if (!j.is_object()) throw doc.error(ptr, "expected an object");
  reject_unknown(doc, j, ptr,
                 {"Ts_s", "Np", "Nc", "Q_diag", "R_diag", "P_diag", "du_lo", "du_hi", "dx_lo", "dx_hi", "u_lo",
                  "u_hi"});
  const int ns = static_cast<int>(p.Q.rows());
  const int nu = static_cast<int>(p.R.rows());
  if (auto v = find(j, "Ts_s")) p.Ts = doc.number(*v, ptr + "/Ts_s");
  if (auto v = find(j, "Np")) p.Np = read_int(doc, *v, ptr + "/Np");
  if (auto v = find(j, "Nc")) p.Nc = read_int(doc, *v, ptr + "/Nc");
  if (auto v = find(j, "Q_diag")) p.Q = read_vector(doc, *v, ptr + "/Q_diag", ns, 0.0).asDiagonal();
  if (auto v = find(j, "P_diag")) p.P = read_vector(doc, *v, ptr + "/P_diag", ns, 0.0).asDiagonal();
  if (auto v = find(j, "R_diag")) p.R = read_vector(doc, *v, ptr + "/R_diag", nu, 0.0).asDiagonal();
  if (auto v = find(j, "du_lo")) p.du_lo = read_vector(doc, *v, ptr + "/du_lo", nu, -kInf);
  if (auto v = find(j, "du_hi")) p.du_hi = read_vector(doc, *v, ptr + "/du_hi", nu, kInf);
  if (auto v = find(j, "dx_lo")) p.dx_lo = read_vector(doc, *v, ptr + "/dx_lo", ns, -kInf);
  if (auto v = find(j, "dx_hi")) p.dx_hi = read_vector(doc, *v, ptr + "/dx_hi", ns, kInf);
  if (auto v = find(j, "u_lo")) p.u_lo = read_vector(doc, *v, ptr + "/u_lo", nu, -kInf);
  if (auto v = find(j, "u_hi")) p.u_hi = read_vector(doc, *v, ptr + "/u_hi", nu, kInf);
}

std::vector<Waypoint> read_waypoints(const JsonDoc& doc, const json& j) {
  const std::string ptr = "/trajectory/waypoints";
  if (!j.is_array() || j.size() < 2) throw doc.error(ptr, "expected at least 2 waypoints");
  std::vector<Waypoint> w;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = ptr + "/" + std::to_string(i);
    if (!j[i].is_object()) throw doc.error(p, "expected an object with t_s and x");
    reject_unknown(doc, j[i], p, {"t_s", "x"});
    Waypoint wp;
    wp.t = doc.number(doc.require(j[i], p, "t_s"), p + "/t_s");
    wp.x = read_vector(doc, doc.require(j[i], p, "x"), p + "/x", 10, 0.0);
    if (!wp.x.allFinite()) throw doc.error(p + "/x", "waypoint entries must be finite");
    w.push_back(wp);
  }
  return w;
}

}  // namespace

Scenario load_scenario(const std::string& text, const std::string& base_dir) {
  const JsonDoc doc(text);
  const json& root = doc.root();
  if (!root.is_object()) throw doc.error("", "scenario document must be a JSON object");
  reject_unknown(doc, root, "",
                 {"model", "architecture", "trajectory", "t_end_s", "substeps", "mpc", "pid", "noise", "seed",
                  "output"});

  Scenario s;
  const Architecture arch = [&] {
    const std::string name = read_string(doc, doc.require(root, "", "architecture"), "/architecture");
    try {
      return architecture_from_string(name);
    } catch (const ArgumentError& e) {
      throw doc.error("/architecture", e.what());
    }
  }();
  s.config = default_config(arch);

  if (auto v = find(root, "model")) s.model_ref = read_string(doc, *v, "/model");
  {
    std::string ref = s.model_ref;
    if (ref != "hcdr9dof" && ref != "builtin:hcdr9dof") {
      const std::filesystem::path p(ref);
      if (p.is_relative()) ref = (std::filesystem::path(base_dir) / p).string();
    }
    s.model = resolve_model(ref);
  }

  if (auto v = find(root, "trajectory")) {
    if (v->is_string()) {
      if (v->get<std::string>() != "case_study") throw doc.error("/trajectory", "unknown builtin trajectory");
    } else if (v->is_object()) {
      reject_unknown(doc, *v, "/trajectory", {"waypoints"});
      s.case_study = false;
      s.waypoints = read_waypoints(doc, doc.require(*v, "/trajectory", "waypoints"));
    } else {
      throw doc.error("/trajectory", "expected \"case_study\" or an object with waypoints");
    }
  }
  if (s.case_study) s.waypoints = case_study_trajectory().waypoints();

  if (auto v = find(root, "t_end_s")) s.config.t_end = doc.number(*v, "/t_end_s");
  if (auto v = find(root, "substeps")) s.config.substeps = read_int(doc, *v, "/substeps");
  if (auto v = find(root, "mpc")) {
    read_mpc(doc, *v, s.config.mpc);
    s.mpc_overrides = *v;
  }
  if (auto v = find(root, "pid")) {
    if (!v->is_object()) throw doc.error("/pid", "expected an object");
    reject_unknown(doc, *v, "/pid", {"kp", "ki", "kd", "torque_limit_Nm"});
    if (auto g = find(*v, "kp")) s.config.pid.kp = doc.number(*g, "/pid/kp");
    if (auto g = find(*v, "ki")) s.config.pid.ki = doc.number(*g, "/pid/ki");
    if (auto g = find(*v, "kd")) s.config.pid.kd = doc.number(*g, "/pid/kd");
    if (auto g = find(*v, "torque_limit_Nm")) s.config.pid_torque_limit = doc.number(*g, "/pid/torque_limit_Nm");
  }
  if (auto v = find(root, "noise")) {
    if (!v->is_object()) throw doc.error("/noise", "expected an object");
    reject_unknown(doc, *v, "/noise", {"std"});
    if (auto sd = find(*v, "std")) s.config.noise.std_dev = read_vector(doc, *sd, "/noise/std", 4, 0.0);
  }
  if (auto v = find(root, "seed")) {
    if (!v->is_number_unsigned()) throw doc.error("/seed", "expected a non-negative integer");
    s.config.seed = v->get<std::uint64_t>();
  }
  if (auto v = find(root, "output")) {
    if (!v->is_object()) throw doc.error("/output", "expected an object");
    reject_unknown(doc, *v, "/output", {"trace", "summary"});
    if (auto n = find(*v, "trace")) s.trace_name = read_string(doc, *n, "/output/trace");
    if (auto n = find(*v, "summary")) s.summary_name = read_string(doc, *n, "/output/summary");
  }

  const SimConfig& c = s.config;
  const int ns = c.architecture == Architecture::kIntegratedII ? 10 : 6;
  const int nu = c.architecture == Architecture::kIntegratedII ? 4 : 2;
  c.mpc.validate(ns, nu);
  if (!(c.t_end > 0.0)) throw ValidationError("t_end_s must be positive");
  if (c.substeps < 1) throw ValidationError("substeps must be at least 1");
  if (c.pid.kp < 0.0 || c.pid.ki < 0.0 || c.pid.kd < 0.0) throw ValidationError("PID gains must be non-negative");
  if (!(c.pid_torque_limit > 0.0)) throw ValidationError("torque_limit_Nm must be positive");
  if (c.noise.std_dev.size() && (c.noise.std_dev.array() < 0.0).any())
    throw ValidationError("noise std must be non-negative");
  scenario_trajectory(s);
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return load_scenario(read_text_file(path), dir.empty() ? "." : dir);
}

Trajectory scenario_trajectory(const Scenario& s) {
  return s.case_study ? case_study_trajectory() : quintic_trajectory(s.waypoints);
}

nlohmann::json comparison_key(const Scenario& s) {
  json j;
  j["model"] = json::parse(serialize_model(s.model));
  json w = json::array();
  for (const Waypoint& wp : s.waypoints) w.push_back({{"t_s", wp.t}, {"x", vector_json(wp.x)}});
  j["trajectory"] = w;
  j["t_end_s"] = s.config.t_end;
  j["substeps"] = s.config.substeps;
  j["mpc_overrides"] = s.mpc_overrides;
  j["pid"] = {{"kp", s.config.pid.kp},
              {"ki", s.config.pid.ki},
              {"kd", s.config.pid.kd},
              {"torque_limit_Nm", s.config.pid_torque_limit}};
  j["noise_std"] = vector_json(s.config.noise.std_dev);
  return j;
}

nlohmann::json canonical_config(const Scenario& s) {
  json j = comparison_key(s);
  j.erase("mpc_overrides");
  const MpcParams& p = s.config.mpc;
  j["architecture"] = architecture_name(s.config.architecture);
  j["mpc"] = {{"Ts_s", p.Ts},
              {"Np", p.Np},
              {"Nc", p.Nc},
              {"Q", matrix_json(p.Q)},
              {"R", matrix_json(p.R)},
              {"P", matrix_json(p.P)},
              {"du_lo", vector_json(p.du_lo)},
              {"du_hi", vector_json(p.du_hi)},
              {"dx_lo", vector_json(p.dx_lo)},
              {"dx_hi", vector_json(p.dx_hi)},
              {"u_lo", vector_json(p.u_lo)},
              {"u_hi", vector_json(p.u_hi)}};
  return j;
}

std::uint64_t fnv1a_64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const Scenario& s) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a_64(canonical_config(s).dump())));
  return buf;
}

}  // namespace hcdr
