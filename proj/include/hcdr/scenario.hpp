#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hcdr/sim.hpp"

namespace hcdr {

/// A closed-loop run description. Omitted MPC/PID fields take the
/// architecture defaults of default_config.
struct Scenario {
  std::string model_ref = "hcdr9dof";
  RobotModel model;
  SimConfig config;
  std::vector<Waypoint> waypoints;
  bool case_study = true;
  nlohmann::json mpc_overrides = nlohmann::json::object();  // as written in the file
  std::string trace_name = "trace";
  std::string summary_name = "summary";
};

/// Parses scenario JSON. Relative model paths resolve against `base_dir`.
Scenario load_scenario(const std::string& text, const std::string& base_dir = ".");
Scenario load_scenario_file(const std::string& path);

Trajectory scenario_trajectory(const Scenario& s);

/// Everything that determines the trace except the seed and output names.
nlohmann::json canonical_config(const Scenario& s);
/// canonical_config without the architecture and its derived MPC sizing; two
/// scenarios with equal keys differ at most in architecture.
nlohmann::json comparison_key(const Scenario& s);

std::uint64_t fnv1a_64(const std::string& bytes);
/// 16 hex digits of FNV-1a 64 over the compact canonical_config dump.
std::string config_hash(const Scenario& s);

}  // namespace hcdr
