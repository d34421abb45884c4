#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hcdr/control.hpp"
#include "hcdr/planar.hpp"
#include "hcdr/trajectory.hpp"

namespace hcdr {

enum class Architecture { kIndependent, kIntegratedI, kIntegratedII };

std::string architecture_name(Architecture a);
Architecture architecture_from_string(const std::string& s);

using OdeFn = std::function<VecX(const VecX& x)>;

/// Classical RK4 with inputs held by the caller's closure. Throws
/// DivergenceError on a non-finite result.
VecX rk4_step(const OdeFn& f, const VecX& x, double dt);

struct NoiseSpec {
  VecX std_dev;  // per input channel; empty = no noise
};

struct SimConfig {
  Architecture architecture = Architecture::kIntegratedII;
  MpcParams mpc;          // sized for the architecture's MPC
  PidGains pid;
  double pid_torque_limit = 20.0;
  NoiseSpec noise;
  std::uint64_t seed = 0;
  double t_end = 6.0;
  int substeps = 10;
  OptimizerOptions stiffness;
  QpOptions qp;
};

/// Default controller and horizon settings for an architecture.
SimConfig default_config(Architecture a);

struct SimTrace {
  std::vector<double> t;
  std::vector<VecX> x;       // 10-vectors
  std::vector<VecX> u;       // applied [T3, T4, tau2, tau3]
  std::vector<VecX> T;       // 12 applied cable tensions
  std::vector<double> L01, L02;
  std::vector<double> KE, VE;
  std::vector<VecX> x_ref;
  std::vector<Eigen::Vector2d> pe, pe_ref;
  std::vector<VecX> u_ref;
};

/// Reference quantities for one controller sample.
struct ReferencePoint {
  double t = 0.0;
  VecX x;       // 10-vector
  VecX u;       // [T3opt, T4opt, tau2r, tau3r]
  double L01 = 0.0, L02 = 0.0;
  VecX L0;      // all cables
  VecX tensions;
};

/// Planned tensions, lengths and torques along the trajectory. With `decoupled`, the plan
/// ignores the arm (platform-only wrench).
ReferencePoint reference_point(const PlanarPlant& coupled, const PlanarPlant& platform, const Trajectory& traj,
                               double t, bool decoupled, const OptimizerOptions& opt = {});

SimTrace simulate(const RobotModel& model, const Trajectory& traj, const SimConfig& cfg);

}  // namespace hcdr
