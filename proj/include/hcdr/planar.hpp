#pragma once

#include "hcdr/dynamics.hpp"
#include "hcdr/stiffness.hpp"

namespace hcdr {

/// In-plane (x0-z0) reduction of the 12-cable HCDR. State
/// x = [p_x, dp_x, p_z, dp_z, beta, dbeta, th2, dth2, th3, dth3] (or its first
/// six entries without the arm), input u = [T3, T4, tau2, tau3] (or
/// [T3, T4]), exogenous upper unstretched lengths (L01, L02). Evaluation goes
/// through the full spatial model with out-of-plane coordinates at zero.
class PlanarPlant {
 public:
  /// Throws Error(kReduction) if the model is not mirror-symmetric about the
  /// x-z plane or the arm does not have the Z, Y, Y revolute layout.
  explicit PlanarPlant(RobotModel model, ActuatorSplit split = {});

  const RobotModel& model() const { return model_; }
  bool has_arm() const { return model_.num_joints() > 0; }
  int state_dim() const { return has_arm() ? 10 : 6; }
  int input_dim() const { return has_arm() ? 4 : 2; }
  const ActuatorSplit& split() const { return split_; }

  VecX q_of(const VecX& x) const;
  VecX qdot_of(const VecX& x) const;
  VecX x_of(const VecX& q, const VecX& qdot) const;
  VecX tau_a_of(const VecX& u) const;

  /// All cable tensions: upper groups from the stretch law, lower groups commanded.
  VecX tensions(const VecX& x, const VecX& u, double L01, double L02) const;

  /// Full generalized acceleration (length dof) for the planar state.
  VecX full_acceleration(const VecX& x, const VecX& u, double L01, double L02) const;
  VecX derivative(const VecX& x, const VecX& u, double L01, double L02) const;

  /// Max |out-of-plane acceleration| at the given state.
  double out_of_plane(const VecX& x, const VecX& u, double L01, double L02) const;

  /// End-effector (x, z) for a planar state.
  Eigen::Vector2d end_effector_xz(const VecX& x) const;

 private:
  RobotModel model_;
  ActuatorSplit split_;
  std::vector<int> upper1_, upper2_, lower1_, lower2_;
};

/// Copy of the model with the arm removed (decoupled platform).
RobotModel platform_only(const RobotModel& model);

}  // namespace hcdr
