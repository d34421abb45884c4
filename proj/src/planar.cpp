#include "hcdr/planar.hpp"

#include <cmath>

#include "hcdr/errors.hpp"

namespace hcdr {

namespace {

Error reduction_error(const std::string& what) { return Error(ErrorCategory::kReduction, what); }

std::vector<int> group_of(const RobotModel& m, int id) {
  auto it = m.platform.actuator_groups.find(id);
  if (it == m.platform.actuator_groups.end())
    throw reduction_error("model has no actuator group " + std::to_string(id));
  return it->second;
}

int group_id_of(const RobotModel& m, int cable) {
  for (const auto& [id, members] : m.platform.actuator_groups)
    for (int i : members)
      if (i == cable) return id;
  return -1;
}

}  // namespace

RobotModel platform_only(const RobotModel& model) {
  RobotModel m = model;
  m.arm.clear();
  return m;
}

PlanarPlant::PlanarPlant(RobotModel model, ActuatorSplit split) : model_(std::move(model)), split_(split) {
  upper1_ = group_of(model_, split_.length_group_1);
  upper2_ = group_of(model_, split_.length_group_2);
  lower1_ = group_of(model_, split_.tension_group_1);
  lower2_ = group_of(model_, split_.tension_group_2);

  // Mirror symmetry about y = 0 within actuator groups.
  const auto& cables = model_.platform.cables;
  for (int i = 0; i < model_.num_cables(); ++i) {
    const Vec3 ma(cables[i].anchor.x(), -cables[i].anchor.y(), cables[i].anchor.z());
    const Vec3 mr(cables[i].attachment.x(), -cables[i].attachment.y(), cables[i].attachment.z());
    bool found = false;
    for (int k = 0; k < model_.num_cables() && !found; ++k) {
      found = (cables[k].anchor - ma).norm() < 1e-12 && (cables[k].attachment - mr).norm() < 1e-12 &&
              cables[k].EA == cables[i].EA && group_id_of(model_, k) == group_id_of(model_, i);
    }
    if (!found) throw reduction_error("cable " + std::to_string(i + 1) + " has no mirror partner about the x-z plane");
  }
  const Mat3 I = model_.platform.inertia;
  if (std::abs(I(0, 1)) > 1e-12 || std::abs(I(1, 2)) > 1e-12)
    throw reduction_error("platform inertia couples pitch with out-of-plane axes");
  if (has_arm()) {
    if (model_.num_joints() != 3) throw reduction_error("planar reduction expects a 3-joint arm");
    const int axes[3] = {2, 1, 1};
    for (int j = 0; j < 3; ++j) {
      const ArmLink& l = model_.arm[j];
      if (l.joint.kind != JointKind::kRevolute || l.joint.axis != axes[j])
        throw reduction_error("arm joints must be revolute about Z, Y, Y");
      if (std::abs(l.joint_offset.y()) > 1e-12 || std::abs(l.com_offset.y()) > 1e-12)
        throw reduction_error("arm offsets must lie in the x-z plane");
    }
  }
}

VecX PlanarPlant::q_of(const VecX& x) const {
  if (x.size() != state_dim()) throw ArgumentError("planar state dimension mismatch");
  VecX q = VecX::Zero(model_.dof());
  q[0] = x[0];
  q[2] = x[2];
  q[4] = x[4];
  if (has_arm()) {
    q[7] = x[6];
    q[8] = x[8];
  }
  return q;
}

VecX PlanarPlant::qdot_of(const VecX& x) const {
  VecX qd = VecX::Zero(model_.dof());
  qd[0] = x[1];
  qd[2] = x[3];
  qd[4] = x[5];
  if (has_arm()) {
    qd[7] = x[7];
    qd[8] = x[9];
  }
  return qd;
}

VecX PlanarPlant::x_of(const VecX& q, const VecX& qd) const {
  VecX x(state_dim());
  x.head<6>() << q[0], qd[0], q[2], qd[2], q[4], qd[4];
  if (has_arm()) x.tail<4>() << q[7], qd[7], q[8], qd[8];
  return x;
}

VecX PlanarPlant::tau_a_of(const VecX& u) const {
  if (u.size() != input_dim()) throw ArgumentError("planar input dimension mismatch");
  VecX t = VecX::Zero(model_.num_joints());
  if (has_arm()) {
    t[1] = u[2];
    t[2] = u[3];
  }
  return t;
}

VecX PlanarPlant::tensions(const VecX& x, const VecX& u, double L01, double L02) const {
  const CableGeometry g = cable_geometry(model_, pose_of(q_of(x)));
  VecX T = VecX::Zero(model_.num_cables());
  for (int i : upper1_) T[i] = model_.platform.cables[i].EA / L01 * (g.length[i] - L01);
  for (int i : upper2_) T[i] = model_.platform.cables[i].EA / L02 * (g.length[i] - L02);
  for (int i : lower1_) T[i] = u[0];
  for (int i : lower2_) T[i] = u[1];
  return T;
}

VecX PlanarPlant::full_acceleration(const VecX& x, const VecX& u, double L01, double L02) const {
  const VecX q = q_of(x), qd = qdot_of(x);
  return forward_dynamics(model_, q, qd, tensions(x, u, L01, L02), tau_a_of(u));
}

VecX PlanarPlant::derivative(const VecX& x, const VecX& u, double L01, double L02) const {
  const VecX qdd = full_acceleration(x, u, L01, L02);
  VecX dx(state_dim());
  dx.head<6>() << x[1], qdd[0], x[3], qdd[2], x[5], qdd[4];
  if (has_arm()) dx.tail<4>() << x[7], qdd[7], x[9], qdd[8];
  return dx;
}

double PlanarPlant::out_of_plane(const VecX& x, const VecX& u, double L01, double L02) const {
  const VecX qdd = full_acceleration(x, u, L01, L02);
  double m = std::max({std::abs(qdd[1]), std::abs(qdd[3]), std::abs(qdd[5])});
  if (has_arm()) m = std::max(m, std::abs(qdd[6]));
  return m;
}

Eigen::Vector2d PlanarPlant::end_effector_xz(const VecX& x) const {
  const Vec3 p = end_effector(model_, q_of(x));
  return {p.x(), p.z()};
}

}  // namespace hcdr
