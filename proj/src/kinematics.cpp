#include "hcdr/kinematics.hpp"

#include <cmath>

#include "hcdr/errors.hpp"

namespace hcdr {

Mat3 rotation(const Vec3& euler, const EulerConvention& conv) {
  Mat3 R = Mat3::Identity();
  for (int a : conv.order) R = R * rot_axis(a, euler[a]);
  return R;
}

void check_euler(const Vec3& euler, const EulerConvention& conv, double eps) {
  if (!euler.allFinite()) throw SingularityError("orientation angles must be finite");
  const double mid = euler[conv.middle_axis()];
  const double dist = std::abs(std::remainder(mid - M_PI / 2, M_PI));
  if (dist < eps) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "Euler singularity: middle angle %.9g rad is within %.1e of pi/2", mid, eps);
    throw SingularityError(buf);
  }
}

Mat3 euler_rate_matrix(const Vec3& euler, const EulerConvention& conv) {
  const int a1 = conv.order[0], a2 = conv.order[1], a3 = conv.order[2];
  const Mat3 R2 = rot_axis(a2, euler[a2]);
  const Mat3 R3 = rot_axis(a3, euler[a3]);
  Mat3 E;
  E.col(a1) = (R2 * R3).transpose().col(a1);
  E.col(a2) = R3.transpose().col(a2);
  E.col(a3) = Vec3::Unit(a3);
  return E;
}

Vec3 euler_rates_to_omega(const Vec3& euler, const Vec3& rates, const EulerConvention& conv, double eps) {
  check_euler(euler, conv, eps);
  return euler_rate_matrix(euler, conv) * rates;
}

Vec3 omega_to_euler_rates(const Vec3& euler, const Vec3& omega, const EulerConvention& conv, double eps) {
  check_euler(euler, conv, eps);
  return euler_rate_matrix(euler, conv).partialPivLu().solve(omega);
}

CableGeometry cable_geometry(const RobotModel& model, const Vec3& p, const Mat3& R) {
  const int n = model.num_cables();
  CableGeometry g;
  g.vec.resize(3, n);
  g.unit.resize(3, n);
  g.moment_arm.resize(3, n);
  g.length.resize(n);
  for (int i = 0; i < n; ++i) {
    const Cable& c = model.platform.cables[i];
    const Vec3 rr = R * c.attachment;
    const Vec3 L = p + rr - c.anchor;
    const double len = L.norm();
    if (!(len > kLengthEps)) throw DegenerateGeometryError(i, len);
    g.vec.col(i) = L;
    g.length[i] = len;
    g.unit.col(i) = L / len;
    g.moment_arm.col(i) = rr;
  }
  return g;
}

CableGeometry cable_geometry(const RobotModel& model, const Pose& pose) {
  check_euler(pose.euler, model.euler);
  return cable_geometry(model, pose.p, rotation(pose.euler, model.euler));
}

MatX structure_matrix(const CableGeometry& g) {
  const int n = static_cast<int>(g.length.size());
  MatX A(6, n);
  for (int i = 0; i < n; ++i) {
    const Vec3 u = g.unit.col(i);
    A.block<3, 1>(0, i) = u;
    A.block<3, 1>(3, i) = Vec3(g.moment_arm.col(i)).cross(u);
  }
  return A;
}

MatX structure_matrix(const RobotModel& model, const Pose& pose) {
  return structure_matrix(cable_geometry(model, pose));
}

VecX cable_rates(const RobotModel& model, const Pose& pose, const PlatformTwist& twist) {
  const CableGeometry g = cable_geometry(model, pose);
  Vec6 w;
  w << twist.v, rotation(pose.euler, model.euler) * twist.omega;
  return structure_matrix(g).transpose() * w;
}

Pose pose_of(const VecX& q) {
  Pose p;
  p.p = q.segment<3>(0);
  p.euler = q.segment<3>(3);
  return p;
}

namespace {

Mat3 joint_rotation(const ArmLink& l, double theta) {
  return l.joint.kind == JointKind::kRevolute ? rot_axis(l.joint.axis, theta) : Mat3::Identity();
}

Vec3 shifted(const Vec3& offset, const ArmLink& l, double theta) {
  if (l.joint.kind == JointKind::kRevolute) return offset;
  Vec3 o = offset;
  o[l.joint.axis] += theta;
  return o;
}

}  // namespace

LinkKinematics link_kinematics(const RobotModel& model, const VecX& q, const VecX& qdot) {
  const int m = model.num_joints();
  if (q.size() != model.dof() || qdot.size() != model.dof())
    throw ArgumentError("state dimension mismatch: expected " + std::to_string(model.dof()));
  const Vec3 euler = q.segment<3>(3);
  check_euler(euler, model.euler);
  const Mat3 R = rotation(euler, model.euler);

  LinkKinematics k;
  const Vec3 p = q.segment<3>(0);
  k.base_pos = p + R * model.mount_offset;
  Mat3 Rj = R * model.mount_rotation;
  Vec3 prev = k.base_pos;
  for (int j = 0; j < m; ++j) {
    const ArmLink& l = model.arm[j];
    const double th = q[6 + j];
    const Mat3 Rl = joint_rotation(l, th);
    Rj = Rj * Rl;
    k.local.push_back(Rl);
    k.rotation.push_back(Rj);
    const Vec3 pj = prev + Rj * shifted(l.joint_offset, l, th);
    k.com_pos.push_back(prev + Rj * shifted(l.com_offset, l, th));
    k.joint_pos.push_back(pj);
    prev = pj;
  }
  const Jacobians J = jacobians(model, q, k);
  for (int j = 0; j < m; ++j) {
    k.com_vel.push_back(J.com_lin[j] * qdot);
    k.omega.push_back(J.link_omega[j] * qdot);
  }
  return k;
}

Jacobians jacobians(const RobotModel& model, const VecX& q, const LinkKinematics& k) {
  const int n = model.dof();
  const int m = model.num_joints();
  const Vec3 euler = q.segment<3>(3);
  const Vec3 p = q.segment<3>(0);
  const Mat3 R = rotation(euler, model.euler);
  const Mat3 E = euler_rate_matrix(euler, model.euler);
  const Mat3 Ew = R * E;  // world angular velocity per Euler rate

  Jacobians J;
  J.platform_omega = MatX::Zero(3, n);
  J.platform_omega.block<3, 3>(0, 3) = E;

  // World-frame joint axes and pivots.
  std::vector<Vec3> axis_w(m), pivot(m);
  for (int kk = 0; kk < m; ++kk) {
    axis_w[kk] = k.rotation[kk].col(model.arm[kk].joint.axis);
    pivot[kk] = kk == 0 ? k.base_pos : k.joint_pos[kk - 1];
  }
  for (int j = 0; j < m; ++j) {
    MatX Jv = MatX::Zero(3, n);
    MatX Jw = MatX::Zero(3, n);
    const Vec3 rc = k.com_pos[j] - p;
    Jv.block<3, 3>(0, 0) = Mat3::Identity();
    Jv.block<3, 3>(0, 3) = -skew(rc) * Ew;
    const Mat3 RjT = k.rotation[j].transpose();
    Jw.block<3, 3>(0, 3) = RjT * Ew;
    for (int kk = 0; kk <= j; ++kk) {
      if (model.arm[kk].joint.kind == JointKind::kRevolute) {
        Jv.col(6 + kk) = axis_w[kk].cross(k.com_pos[j] - pivot[kk]);
        Jw.col(6 + kk) = RjT * axis_w[kk];
      } else {
        Jv.col(6 + kk) = axis_w[kk];
      }
    }
    J.com_lin.push_back(Jv);
    J.link_omega.push_back(Jw);
  }
  return J;
}

Vec3 end_effector(const RobotModel& model, const VecX& q) {
  const VecX zero = VecX::Zero(q.size());
  const LinkKinematics k = link_kinematics(model, q, zero);
  return k.joint_pos.empty() ? k.base_pos : k.joint_pos.back();
}

}  // namespace hcdr
