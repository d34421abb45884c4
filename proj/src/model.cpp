#include "hcdr/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hcdr/errors.hpp"

namespace hcdr {

EulerConvention EulerConvention::from_string(const std::string& s) {
  std::string t;
  for (char c : s) {
    if (c == 'X' || c == 'x') t += 'X';
    else if (c == 'Y' || c == 'y') t += 'Y';
    else if (c == 'Z' || c == 'z') t += 'Z';
  }
  if (t.size() != 3) throw ArgumentError("euler order '" + s + "' must name three axes");
  EulerConvention e;
  for (int k = 0; k < 3; ++k) e.order[k] = t[k] - 'X';
  std::array<int, 3> sorted = e.order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::array<int, 3>{0, 1, 2})
    throw ArgumentError("euler order '" + s + "' is not a proper Tait-Bryan sequence");
  return e;
}

std::string EulerConvention::to_string() const {
  std::string s;
  for (int a : order) s += static_cast<char>('X' + a);
  return s;
}

namespace {

bool symmetric(const Mat3& m) { return (m - m.transpose()).norm() <= 1e-12 * (1.0 + m.norm()); }

void check_inertia(const Mat3& I, const std::string& who, bool strict) {
  if (!I.allFinite()) throw ValidationError(who + " inertia must be finite");
  if (!symmetric(I)) throw ValidationError(who + " inertia must be symmetric");
  const double mn = Eigen::SelfAdjointEigenSolver<Mat3>(I).eigenvalues().minCoeff();
  if (strict && mn <= 0.0) throw ValidationError(who + " inertia must be positive definite");
  if (!strict && mn < -1e-12) throw ValidationError(who + " inertia must be positive semidefinite");
}

}  // namespace

void validate_model(const RobotModel& model, bool require_cables) {
  const auto& p = model.platform;
  if (!(p.mass > 0.0) || !std::isfinite(p.mass)) throw ValidationError("platform mass must be positive");
  check_inertia(p.inertia, "platform", true);
  const int n = model.num_cables();
  if (require_cables && n < 1) throw ValidationError("at least one cable is required");
  for (int i = 0; i < n; ++i) {
    const Cable& c = p.cables[i];
    const std::string who = "cable " + std::to_string(i + 1);
    if (!c.anchor.allFinite() || !c.attachment.allFinite())
      throw ValidationError(who + " geometry must be finite");
    if (!(c.EA > 0.0)) throw ValidationError(who + " EA must be positive");
    if (!(c.Tmin >= 0.0)) throw ValidationError(who + " Tmin must be nonnegative");
    if (!(c.Tmin <= c.Tmax)) throw ValidationError(who + " requires Tmin <= Tmax");
  }
  if (!p.actuator_groups.empty() || n > 0) {
    std::set<int> seen;
    for (const auto& [id, members] : p.actuator_groups) {
      for (int idx : members) {
        if (idx < 0 || idx >= n)
          throw ValidationError("actuator group " + std::to_string(id) + " references unknown cable " +
                                std::to_string(idx + 1));
        if (!seen.insert(idx).second)
          throw ValidationError("actuator groups are not disjoint (cable " + std::to_string(idx + 1) + ")");
      }
    }
    if (static_cast<int>(seen.size()) != n)
      throw ValidationError("actuator groups do not cover every cable");
  }
  for (int j = 0; j < model.num_joints(); ++j) {
    const ArmLink& l = model.arm[j];
    const std::string who = "arm link " + std::to_string(j + 1);
    if (!(l.mass > 0.0)) throw ValidationError(who + " mass must be positive");
    check_inertia(l.inertia, who, false);
    if (l.joint.axis < 0 || l.joint.axis > 2) throw ValidationError(who + " joint axis must be X, Y or Z");
  }
  const Mat3& R = model.mount_rotation;
  if ((R.transpose() * R - Mat3::Identity()).norm() > 1e-9 || std::abs(R.determinant() - 1.0) > 1e-9)
    throw ValidationError("mount rotation must be orthonormal with determinant +1");
  if (!(model.gravity >= 0.0) || !std::isfinite(model.gravity))
    throw ValidationError("gravity must be finite and nonnegative");
}

void validate_quadrotor(const QuadrotorParams& q) {
  if (!(q.arm_length > 0.0)) throw ValidationError("quadrotor arm length must be positive");
  if (!(q.mass > 0.0)) throw ValidationError("quadrotor mass must be positive");
  check_inertia(q.inertia, "quadrotor", true);
  const double d = q.arm_length;
  const std::array<Vec3, 4> expect{Vec3(d, 0, 0), Vec3(0, d, 0), Vec3(-d, 0, 0), Vec3(0, -d, 0)};
  for (int i = 0; i < 4; ++i)
    if ((q.rotor_positions[i] - expect[i]).norm() > 1e-12)
      throw ValidationError("rotor " + std::to_string(i + 1) + " position inconsistent with arm length");
}

bool models_equal(const RobotModel& a, const RobotModel& b) {
  const auto& pa = a.platform;
  const auto& pb = b.platform;
  if (pa.mass != pb.mass || pa.inertia != pb.inertia || pa.actuator_groups != pb.actuator_groups) return false;
  if (pa.cables.size() != pb.cables.size() || a.arm.size() != b.arm.size()) return false;
  for (size_t i = 0; i < pa.cables.size(); ++i) {
    const Cable& x = pa.cables[i];
    const Cable& y = pb.cables[i];
    if (x.anchor != y.anchor || x.attachment != y.attachment || x.EA != y.EA || x.Tmin != y.Tmin ||
        x.Tmax != y.Tmax)
      return false;
  }
  for (size_t j = 0; j < a.arm.size(); ++j) {
    const ArmLink& x = a.arm[j];
    const ArmLink& y = b.arm[j];
    if (x.mass != y.mass || x.inertia != y.inertia || x.joint.kind != y.joint.kind ||
        x.joint.axis != y.joint.axis || x.joint_offset != y.joint_offset || x.com_offset != y.com_offset)
      return false;
  }
  return a.mount_offset == b.mount_offset && a.mount_rotation == b.mount_rotation &&
         a.gravity == b.gravity && a.euler == b.euler;
}

RobotModel builtin_hcdr9dof() {
  // Anchor a_i (world) and attachment r_i (platform frame), metres.
  static const double kTable[12][6] = {
      {1.5, 0, 0.5, 0.153, -0.065, 0.048},      {1.58, -0.065, 0.404, 0.233, 0, -0.048},
      {1.5, 0, -0.5, 0.223, -0.088, -0.017},    {-1.5, 0, -0.5, -0.223, -0.088, -0.017},
      {-1.58, -0.065, 0.404, -0.233, 0, -0.048}, {-1.5, 0, 0.5, -0.153, -0.065, 0.048},
      {1.5, 0, 0.5, 0.153, 0.065, 0.048},       {1.58, 0.065, 0.404, 0.233, 0, -0.048},
      {1.5, 0, -0.5, 0.223, 0.088, -0.017},     {-1.5, 0, -0.5, -0.223, 0.088, -0.017},
      {-1.58, 0.065, 0.404, -0.233, 0, -0.048},  {-1.5, 0, 0.5, -0.153, 0.065, 0.048},
  };
  RobotModel m;
  m.platform.mass = 10.0;
  m.platform.inertia = Vec3(0.0218, 0.1187, 0.1251).asDiagonal();
  for (const auto& row : kTable) {
    Cable c;
    c.anchor = Vec3(row[0], row[1], row[2]);
    c.attachment = Vec3(row[3], row[4], row[5]);
    c.EA = 100.0;
    c.Tmin = 5.0;
    c.Tmax = 80.0;
    m.platform.cables.push_back(c);
  }
  m.platform.actuator_groups = {{1, {4, 5, 10, 11}}, {2, {0, 1, 6, 7}}, {3, {3, 9}}, {4, {2, 8}}};
  const int axes[3] = {2, 1, 1};
  for (int axis : axes) {
    ArmLink l;
    l.mass = 0.4;
    l.inertia = Mat3::Identity() * 0.1;
    l.joint = {JointKind::kRevolute, axis};
    l.joint_offset = Vec3(0, 0, 0.1);
    l.com_offset = Vec3(0, 0, 0.05);
    m.arm.push_back(l);
  }
  m.mount_offset = Vec3(0, 0, 0.048);
  m.mount_rotation = Mat3::Identity();
  m.gravity = 9.81;
  return m;
}

std::vector<int> hcdr9dof_upper_cables() { return {0, 1, 4, 5, 6, 7, 10, 11}; }

std::pair<QuadrotorParams, RobotModel> builtin_quadrotor_arm(double arm_length) {
  QuadrotorParams q;
  q.arm_length = arm_length;
  const double d = arm_length;
  q.rotor_positions = {Vec3(d, 0, 0), Vec3(0, d, 0), Vec3(-d, 0, 0), Vec3(0, -d, 0)};

  RobotModel m;
  m.platform.mass = q.mass;
  m.platform.inertia = q.inertia;
  m.euler = EulerConvention::from_string("ZXY");
  const int axes[2] = {2, 1};
  for (int axis : axes) {
    ArmLink l;
    l.mass = 0.05;
    l.inertia = Vec3(2e-5, 2e-5, 2e-6).asDiagonal();
    l.joint = {JointKind::kRevolute, axis};
    l.joint_offset = Vec3(0, 0, 0.05);
    l.com_offset = Vec3(0, 0, 0.025);
    m.arm.push_back(l);
  }
  m.mount_offset = Vec3(0, 0, -0.03);
  m.mount_rotation = rot_x(M_PI);  // arm hangs below the airframe
  m.mount_rotation = m.mount_rotation.unaryExpr([](double v) { return std::round(v); });
  m.gravity = 9.81;
  return {q, m};
}

}  // namespace hcdr
