#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hcdr/linalg.hpp"

namespace hcdr {

enum class JointKind { kRevolute, kPrismatic };

struct JointSpec {
  JointKind kind = JointKind::kRevolute;
  int axis = 2;  // 0 = X, 1 = Y, 2 = Z
};

struct Cable {
  Vec3 anchor = Vec3::Zero();      // a_i, world frame
  Vec3 attachment = Vec3::Zero();  // r_i, platform body frame
  double EA = 0.0;                 // axial stiffness, N
  double Tmin = 0.0;
  double Tmax = 0.0;
};

struct PlatformParams {
  double mass = 0.0;
  Mat3 inertia = Mat3::Identity();
  std::vector<Cable> cables;
  // Actuator id -> 0-based cable indices.
  std::map<int, std::vector<int>> actuator_groups;
};

struct ArmLink {
  double mass = 0.0;
  Mat3 inertia = Mat3::Zero();
  JointSpec joint;
  Vec3 joint_offset = Vec3::Zero();
  Vec3 com_offset = Vec3::Zero();
};

/// Intrinsic Euler sequence. order[0] is the outermost rotation. Angle k of a
/// pose is always the angle about axis k (alpha about X, beta about Y, gamma
/// about Z), whatever the order.
struct EulerConvention {
  std::array<int, 3> order{0, 1, 2};

  static EulerConvention from_string(const std::string& s);
  std::string to_string() const;
  int middle_axis() const { return order[1]; }
  bool operator==(const EulerConvention& o) const { return order == o.order; }
};

struct RobotModel {
  PlatformParams platform;
  std::vector<ArmLink> arm;
  Vec3 mount_offset = Vec3::Zero();
  Mat3 mount_rotation = Mat3::Identity();
  double gravity = 9.81;
  EulerConvention euler;

  int num_cables() const { return static_cast<int>(platform.cables.size()); }
  int num_joints() const { return static_cast<int>(arm.size()); }
  int dof() const { return 6 + num_joints(); }
};

struct QuadrotorParams {
  double mass = 0.5;
  Mat3 inertia = Vec3(2.32e-3, 2.32e-3, 4.0e-3).asDiagonal();
  double arm_length = 0.175;
  double moment_ratio = 0.0245;  // k_M / k_F, m
  std::array<Vec3, 4> rotor_positions;
};

/// Checks every model invariant and throws ValidationError naming the first
/// failure. Rigid-body carriers without cables pass with require_cables=false.
void validate_model(const RobotModel& model, bool require_cables = true);
void validate_quadrotor(const QuadrotorParams& params);

bool models_equal(const RobotModel& a, const RobotModel& b);

RobotModel builtin_hcdr9dof();

/// Default quadrotor numbers are placeholders for a small quadrotor, not
/// measured values. Arm link defaults follow the same convention.
std::pair<QuadrotorParams, RobotModel> builtin_quadrotor_arm(double arm_length = 0.175);

/// Parses a JSON model document. Throws ParseError (field + line) on schema
/// violations and ValidationError on invariant violations.
RobotModel load_model(const std::string& text);
RobotModel load_model_file(const std::string& path);
/// Resolves "hcdr9dof" (builtin) or a file path.
RobotModel resolve_model(const std::string& ref);
std::string serialize_model(const RobotModel& model);

/// Upper cables carry position control; the rest have commanded tension.
std::vector<int> hcdr9dof_upper_cables();

}  // namespace hcdr
