#pragma once

#include <vector>

#include "hcdr/model.hpp"

namespace hcdr {

inline constexpr double kSingularityEps = 1e-6;
inline constexpr double kLengthEps = 1e-9;

struct Pose {
  Vec3 p = Vec3::Zero();
  Vec3 euler = Vec3::Zero();  // (alpha, beta, gamma) about (X, Y, Z)
};

/// Platform twist. omega is expressed in the platform body frame, so the
/// stacked twist in the rate identity is [v; R * omega].
struct PlatformTwist {
  Vec3 v = Vec3::Zero();
  Vec3 omega = Vec3::Zero();
};

struct CableGeometry {
  Eigen::Matrix3Xd vec;   // L_i, anchor -> attachment
  VecX length;
  Eigen::Matrix3Xd unit;
  Eigen::Matrix3Xd moment_arm;  // R r_i
};

struct LinkKinematics {
  std::vector<Mat3> rotation;   // R_g^{aj}, link frame to world
  std::vector<Mat3> local;      // R_{a(j-1)}^{aj}
  std::vector<Vec3> joint_pos;  // p_aj
  std::vector<Vec3> com_pos;    // p_acj
  std::vector<Vec3> com_vel;    // v_acj, world
  std::vector<Vec3> omega;      // omega_acj, link body frame
  Vec3 base_pos = Vec3::Zero(); // p_a0
};

/// Per-link Jacobians with respect to qdot. Linear parts are world-frame,
/// angular parts are body-frame of the respective body.
struct Jacobians {
  MatX platform_omega;          // 3 x dof
  std::vector<MatX> com_lin;    // 3 x dof each
  std::vector<MatX> link_omega; // 3 x dof each
};

Mat3 rotation(const Vec3& euler, const EulerConvention& conv = {});

/// Throws SingularityError when the middle angle of the sequence is within
/// eps of +-pi/2.
void check_euler(const Vec3& euler, const EulerConvention& conv = {}, double eps = kSingularityEps);

/// E with omega_body = E * euler_rates (columns indexed by angle).
Mat3 euler_rate_matrix(const Vec3& euler, const EulerConvention& conv = {});

Vec3 euler_rates_to_omega(const Vec3& euler, const Vec3& euler_rates, const EulerConvention& conv = {},
                          double eps = kSingularityEps);
Vec3 omega_to_euler_rates(const Vec3& euler, const Vec3& omega_body, const EulerConvention& conv = {},
                          double eps = kSingularityEps);

CableGeometry cable_geometry(const RobotModel& model, const Vec3& p, const Mat3& R);
CableGeometry cable_geometry(const RobotModel& model, const Pose& pose);

/// 6 x N matrix with columns [unit_i; (R r_i) x unit_i].
MatX structure_matrix(const CableGeometry& geom);
MatX structure_matrix(const RobotModel& model, const Pose& pose);

VecX cable_rates(const RobotModel& model, const Pose& pose, const PlatformTwist& twist);

Pose pose_of(const VecX& q);

LinkKinematics link_kinematics(const RobotModel& model, const VecX& q, const VecX& qdot);
Jacobians jacobians(const RobotModel& model, const VecX& q, const LinkKinematics& kin);

/// End-effector (tip of the last link) in world frame.
Vec3 end_effector(const RobotModel& model, const VecX& q);

}  // namespace hcdr
