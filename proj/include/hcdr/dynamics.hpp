#pragma once

#include <vector>

#include "hcdr/kinematics.hpp"

namespace hcdr {

inline constexpr double kMaxCondition = 1e12;

struct DynTerms {
  MatX M;
  MatX C;
  VecX G;
};

struct Energies {
  double kinetic = 0.0;
  double potential = 0.0;  // gravity + elastic
  double gravity = 0.0;
  double elastic = 0.0;
};

MatX mass_matrix(const RobotModel& model, const VecX& q);
VecX gravity_vector(const RobotModel& model, const VecX& q);
DynTerms dyn_terms(const RobotModel& model, const VecX& q, const VecX& qdot);

/// Gravity potential uses z = 0 as datum. Elastic energy is summed over
/// `cables` (all cables when empty).
Energies energies(const RobotModel& model, const VecX& q, const VecX& qdot, const VecX& L0,
                  const std::vector<int>& cables = {});

/// Generalized force of cable tensions. Positive tensions pull the platform
/// toward the anchors: Q = -diag(I, E_w^T) A_m T.
VecX cable_generalized_force(const RobotModel& model, const VecX& q, const VecX& T);

/// Maps a world-frame platform wrench to generalized platform coordinates.
Vec6 wrench_to_generalized(const RobotModel& model, const Vec3& euler, const Vec6& wrench);
Vec6 generalized_to_wrench(const RobotModel& model, const Vec3& euler, const Vec6& tau_platform);

/// tau = M qddot + C qdot + G + tau_d.
VecX inverse_dynamics(const RobotModel& model, const VecX& q, const VecX& qdot, const VecX& qddot,
                      const VecX& tau_d = VecX());

/// qddot = M^{-1}(tau - C qdot - G - tau_d) for a generalized force tau.
VecX forward_dynamics_generalized(const RobotModel& model, const VecX& q, const VecX& qdot, const VecX& tau,
                                  const VecX& tau_d = VecX());

/// Cable-driven forward dynamics: tau = [cable force(T); tau_a].
VecX forward_dynamics(const RobotModel& model, const VecX& q, const VecX& qdot, const VecX& T,
                      const VecX& tau_a, const VecX& tau_d = VecX());

/// Stretch-law tensions, T_i = (EA_i / L0_i)(L_i - L0_i).
VecX cable_tensions_from_stretch(const RobotModel& model, const Pose& pose, const VecX& L0,
                                 bool clamp_slack = false);
VecX tensions_from_lengths(const RobotModel& model, const VecX& L, const VecX& L0, bool clamp_slack = false);

}  // namespace hcdr
