#pragma once

#include <vector>

#include "hcdr/kinematics.hpp"

namespace hcdr {

struct StiffnessResult {
  Mat6 K = Mat6::Zero();
  Mat6 KT = Mat6::Zero();
  Mat6 Kk = Mat6::Zero();
  Vec6 eigs = Vec6::Zero();  // ascending, of (K + K^T)/2
  double JK = 0.0;
  double asymmetry = 0.0;    // max |K - K^T|
  bool is_stable = false;    // min eig > 0
  VecX lambda;
  VecX T;
};

/// Tension-dependent part. P is the platform position and a world-frame
/// small-rotation vector.
Mat6 stiffness_KT(const CableGeometry& geom, const VecX& T);
Mat6 stiffness_KT(const RobotModel& model, const Pose& pose, const VecX& T);

/// Elastic part summed over `cables` with per-cable stiffness kc (N/m).
Mat6 stiffness_Kk(const CableGeometry& geom, const VecX& kc, const std::vector<int>& cables);
Mat6 stiffness_Kk(const RobotModel& model, const Pose& pose, const VecX& L0, const std::vector<int>& cables);

/// dA_m/dP_k for the six pose coordinates by central differences. Rotations
/// are perturbed as R <- exp([dtheta]) R.
std::vector<MatX> structure_matrix_derivative(const RobotModel& model, const Pose& pose, double h = 1e-6);
/// K_T assembled from the finite-difference derivative: column k = (dA/dP_k) T.
Mat6 stiffness_KT_numeric(const RobotModel& model, const Pose& pose, const VecX& T, double h = 1e-6);

double objective_JK(const Mat6& K, const Mat6& H = Mat6::Identity());
StiffnessResult evaluate_stiffness(const Mat6& KT, const Mat6& Kk, const Mat6& H = Mat6::Identity());

/// Per-cable stiffness consistent with the stretch law: EA/L0 = (EA + T)/L.
VecX stretch_consistent_kc(const RobotModel& model, const VecX& L, const VecX& T);

/// K(lambda) for T = distribute(A, tau, lambda), with elastic cables `cables`.
StiffnessResult stiffness_of_lambda(const RobotModel& model, const Pose& pose, const VecX& tau_m,
                                    const VecX& lambda, const std::vector<int>& cables,
                                    const Mat6& H = Mat6::Identity());

/// L0_i = EA_i L_i / (EA_i + T_i).
VecX unstretched_lengths_for(const RobotModel& model, const Pose& pose, const VecX& T);
VecX unstretched_lengths_for(const RobotModel& model, const VecX& L, const VecX& T);

/// Affine tension family T(lambda) = T0 + N lambda with elastic cables whose
/// stiffness is kc(lambda) = kc0 + kcN lambda.
struct TensionFamily {
  CableGeometry geom;
  VecX T0;
  MatX N;
  std::vector<int> elastic;
  VecX kc0;
  MatX kcN;
  VecX Tmin;
  VecX Tmax;
};

struct OptimizerOptions {
  Mat6 H = Mat6::Identity();
  int grid_resolution = 0;  // 0 selects 76 for <= 2 free variables, 7 otherwise
  bool polish = true;
  int polish_iterations = 200;
  double polish_tolerance = 1e-8;
};

/// Maximizes J_K over the bounded family. Candidates are the vertices of the
/// feasible polytope plus a grid over its bounding box; ties break toward the
/// lexicographically smallest lambda. Throws InfeasibleError when no lambda
/// satisfies the bounds.
StiffnessResult optimize_family(const TensionFamily& family, const OptimizerOptions& opt = {});
StiffnessResult evaluate_family(const TensionFamily& family, const VecX& lambda, const Mat6& H = Mat6::Identity());

/// Generic redundancy form: T = pinv(A) tau_m + N_A lambda over all cables.
TensionFamily nullspace_family(const RobotModel& model, const Pose& pose, const VecX& tau_m,
                               const std::vector<int>& elastic);

/// Reference-point optimization: nominal wrench from inverse dynamics at
/// (q, qdot, qddot), then maximize J_K over the null-space family.
StiffnessResult optimize_tensions(const RobotModel& model, const VecX& q, const VecX& qdot, const VecX& qddot,
                                  const OptimizerOptions& opt = {});

/// Length-controlled and tension-controlled actuator split (defaults are the
/// 12-cable HCDR: groups 1 and 2 set unstretched lengths, 3 and 4 tensions).
struct ActuatorSplit {
  int length_group_1 = 1;
  int length_group_2 = 2;
  int tension_group_1 = 3;
  int tension_group_2 = 4;
};

/// Family with fixed unstretched lengths on the length-controlled groups and
/// the two tension-controlled groups free (lambda = (T3, T4)). The wrench is
/// not balanced, so the result is a stiffness landscape rather than a set of equilibria.
TensionFamily fixed_length_family(const RobotModel& model, const Pose& pose, double L01, double L02,
                                  const ActuatorSplit& split = {});

struct PlanarTensionPlan {
  StiffnessResult stiffness;
  double L01 = 0.0;
  double L02 = 0.0;
  double T3 = 0.0;
  double T4 = 0.0;
  VecX L0;  // all cables; tension-controlled cables get stretch-consistent values
};

/// Planar tension plan for the HCDR: the x, z and pitch rows of the cable
/// wrench must equal `tau_m` (A_m T = tau_m); unknowns are 1/L01, 1/L02, T3,
/// T4, leaving one free direction which is optimized for J_K.
PlanarTensionPlan plan_planar_tensions(const RobotModel& model, const Pose& pose, const VecX& tau_m,
                                    const OptimizerOptions& opt = {}, const ActuatorSplit& split = {});

struct StiffnessMapPoint {
  double T3, T4, JK, min_eig;
};
std::vector<StiffnessMapPoint> stiffness_map(const RobotModel& model, const Pose& pose, double L01, double L02,
                                             int resolution = 76, const Mat6& H = Mat6::Identity(),
                                             const ActuatorSplit& split = {});

}  // namespace hcdr
