#pragma once

#include "hcdr/dynamics.hpp"

namespace hcdr {

struct QuadrotorStructure {
  MatX reduced;  // 6 x 4, maps [F1..F4] to the world wrench
  MatX full;     // 6 x 8, maps [F1..F4, M1..M4] to the world wrench
};

QuadrotorStructure quadrotor_structure_matrix(const QuadrotorParams& params, const Pose& pose,
                                              const EulerConvention& conv = EulerConvention::from_string("ZXY"));

/// Generalized force of rotor thrusts on the platform coordinates.
VecX quadrotor_generalized_force(const QuadrotorParams& params, const RobotModel& model, const VecX& q,
                                 const Eigen::Vector4d& F);

VecX hybrid_forward_dynamics_quadrotor(const QuadrotorParams& params, const RobotModel& model, const VecX& q,
                                       const VecX& qdot, const Eigen::Vector4d& F, const VecX& tau_a,
                                       const VecX& tau_d = VecX());

/// Rotor thrusts and joint torques reproducing qddot. Thrusts are the
/// least-squares fit of the platform rows; the residual is returned so callers
/// can tell whether the motion is realizable (four rotors, six coordinates).
struct QuadrotorInverse {
  Eigen::Vector4d F;
  VecX tau_a;
  double platform_residual = 0.0;
};
QuadrotorInverse hybrid_inverse_dynamics_quadrotor(const QuadrotorParams& params, const RobotModel& model,
                                                   const VecX& q, const VecX& qdot, const VecX& qddot,
                                                   const VecX& tau_d = VecX());

/// Equal thrusts that carry the whole vehicle (airframe plus arm).
Eigen::Vector4d hover_thrusts(const RobotModel& model);

}  // namespace hcdr
