#include "hcdr/quadrotor.hpp"

#include "hcdr/errors.hpp"

namespace hcdr {

QuadrotorStructure quadrotor_structure_matrix(const QuadrotorParams& params, const Pose& pose,
                                              const EulerConvention& conv) {
  validate_quadrotor(params);
  const Mat3 R = rotation(pose.euler, conv);
  const Vec3 u = R * Vec3::UnitZ();
  const double kappa = params.moment_ratio;
  QuadrotorStructure s;
  s.full = MatX::Zero(6, 8);
  for (int i = 0; i < 4; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    s.full.block<3, 1>(0, i) = u;
    s.full.block<3, 1>(3, i) = (R * params.rotor_positions[i]).cross(u);
    s.full.block<3, 1>(3, 4 + i) = sign * u;
  }
  // M_i = (k_M / k_F) F_i folds the moment columns into the thrust columns.
  s.reduced = s.full.leftCols(4);
  for (int i = 0; i < 4; ++i) s.reduced.col(i) += kappa * s.full.col(4 + i);
  return s;
}

VecX quadrotor_generalized_force(const QuadrotorParams& params, const RobotModel& model, const VecX& q,
                                 const Eigen::Vector4d& F) {
  const Pose pose = pose_of(q);
  check_euler(pose.euler, model.euler);
  const QuadrotorStructure s = quadrotor_structure_matrix(params, pose, model.euler);
  VecX Q = VecX::Zero(model.dof());
  Q.head<6>() = wrench_to_generalized(model, pose.euler, s.reduced * F);
  return Q;
}

VecX hybrid_forward_dynamics_quadrotor(const QuadrotorParams& params, const RobotModel& model, const VecX& q,
                                       const VecX& qdot, const Eigen::Vector4d& F, const VecX& tau_a,
                                       const VecX& tau_d) {
  if (tau_a.size() != model.num_joints()) throw ArgumentError("tau_a dimension mismatch");
  VecX tau = quadrotor_generalized_force(params, model, q, F);
  tau.tail(model.num_joints()) += tau_a;
  return forward_dynamics_generalized(model, q, qdot, tau, tau_d);
}

QuadrotorInverse hybrid_inverse_dynamics_quadrotor(const QuadrotorParams& params, const RobotModel& model,
                                                   const VecX& q, const VecX& qdot, const VecX& qddot,
                                                   const VecX& tau_d) {
  const VecX tau = inverse_dynamics(model, q, qdot, qddot, tau_d);
  const Pose pose = pose_of(q);
  const QuadrotorStructure s = quadrotor_structure_matrix(params, pose, model.euler);
  MatX B(6, 4);
  for (int i = 0; i < 4; ++i) {
    Vec6 col = s.reduced.col(i);
    B.col(i) = wrench_to_generalized(model, pose.euler, col);
  }
  QuadrotorInverse out;
  out.F = B.colPivHouseholderQr().solve(tau.head<6>());
  out.platform_residual = (B * out.F - tau.head<6>()).norm();
  out.tau_a = tau.tail(model.num_joints());
  return out;
}

Eigen::Vector4d hover_thrusts(const RobotModel& model) {
  double mass = model.platform.mass;
  for (const ArmLink& l : model.arm) mass += l.mass;
  return Eigen::Vector4d::Constant(mass * model.gravity / 4.0);
}

}  // namespace hcdr
