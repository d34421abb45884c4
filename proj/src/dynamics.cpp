#include "hcdr/dynamics.hpp"

#include <cmath>
#include <limits>

#include "hcdr/errors.hpp"

namespace hcdr {

namespace {

MatX assemble_mass(const RobotModel& model, const Jacobians& J) {
  const int n = model.dof();
  MatX M = MatX::Zero(n, n);
  M.block<3, 3>(0, 0) = model.platform.mass * Mat3::Identity();
  M.noalias() += J.platform_omega.transpose() * model.platform.inertia * J.platform_omega;
  for (int j = 0; j < model.num_joints(); ++j) {
    const ArmLink& l = model.arm[j];
    M.noalias() += l.mass * J.com_lin[j].transpose() * J.com_lin[j];
    M.noalias() += J.link_omega[j].transpose() * l.inertia * J.link_omega[j];
  }
  return 0.5 * (M + M.transpose());
}

VecX zero_like(const VecX& q) { return VecX::Zero(q.size()); }

}  // namespace

MatX mass_matrix(const RobotModel& model, const VecX& q) {
  const LinkKinematics k = link_kinematics(model, q, zero_like(q));
  return assemble_mass(model, jacobians(model, q, k));
}

VecX gravity_vector(const RobotModel& model, const VecX& q) {
  const LinkKinematics k = link_kinematics(model, q, zero_like(q));
  const Jacobians J = jacobians(model, q, k);
  VecX G = VecX::Zero(model.dof());
  G[2] = model.platform.mass * model.gravity;
  for (int j = 0; j < model.num_joints(); ++j)
    G += model.arm[j].mass * model.gravity * J.com_lin[j].row(2).transpose();
  return G;
}

DynTerms dyn_terms(const RobotModel& model, const VecX& q, const VecX& qdot) {
  const int n = model.dof();
  if (qdot.size() != n) throw ArgumentError("qdot dimension mismatch");
  DynTerms d;
  d.M = mass_matrix(model, q);
  d.G = gravity_vector(model, q);

  // Christoffel symbols from central differences of M.
  MatX Mdot = MatX::Zero(n, n);
  MatX V(n, n);  // column k = (dM/dq_k) qdot
  for (int kk = 0; kk < n; ++kk) {
    const double h = 1e-6 * std::max(1.0, std::abs(q[kk]));
    VecX qp = q, qm = q;
    qp[kk] += h;
    qm[kk] -= h;
    const MatX Dk = (mass_matrix(model, qp) - mass_matrix(model, qm)) / (2.0 * h);
    Mdot += Dk * qdot[kk];
    V.col(kk) = Dk * qdot;
  }
  d.C = 0.5 * (Mdot + V - V.transpose());
  return d;
}

Energies energies(const RobotModel& model, const VecX& q, const VecX& qdot, const VecX& L0,
                  const std::vector<int>& cables) {
  const LinkKinematics k = link_kinematics(model, q, qdot);
  Energies e;
  const Vec3 v = qdot.segment<3>(0);
  const Vec3 w = euler_rate_matrix(q.segment<3>(3), model.euler) * qdot.segment<3>(3);
  e.kinetic = 0.5 * model.platform.mass * v.squaredNorm() + 0.5 * w.dot(model.platform.inertia * w);
  e.gravity = model.platform.mass * model.gravity * q[2];
  for (int j = 0; j < model.num_joints(); ++j) {
    const ArmLink& l = model.arm[j];
    e.kinetic += 0.5 * l.mass * k.com_vel[j].squaredNorm() + 0.5 * k.omega[j].dot(l.inertia * k.omega[j]);
    e.gravity += l.mass * model.gravity * k.com_pos[j].z();
  }
  if (model.num_cables() > 0) {
    if (L0.size() != model.num_cables()) throw ArgumentError("L0 dimension mismatch");
    const CableGeometry g = cable_geometry(model, pose_of(q));
    auto add = [&](int i) {
      if (!(L0[i] > 0.0)) throw ArgumentError("unstretched lengths must be positive");
      const double s = g.length[i] - L0[i];
      e.elastic += 0.5 * model.platform.cables[i].EA / L0[i] * s * s;
    };
    if (cables.empty())
      for (int i = 0; i < model.num_cables(); ++i) add(i);
    else
      for (int i : cables) add(i);
  }
  e.potential = e.gravity + e.elastic;
  return e;
}

Vec6 wrench_to_generalized(const RobotModel& model, const Vec3& euler, const Vec6& wrench) {
  const Mat3 Ew = rotation(euler, model.euler) * euler_rate_matrix(euler, model.euler);
  Vec6 t;
  t << wrench.head<3>(), Ew.transpose() * wrench.tail<3>();
  return t;
}

Vec6 generalized_to_wrench(const RobotModel& model, const Vec3& euler, const Vec6& tau) {
  check_euler(euler, model.euler);
  const Mat3 Ew = rotation(euler, model.euler) * euler_rate_matrix(euler, model.euler);
  Vec6 w;
  w << tau.head<3>(), Ew.transpose().partialPivLu().solve(Vec3(tau.tail<3>()));
  return w;
}

VecX cable_generalized_force(const RobotModel& model, const VecX& q, const VecX& T) {
  if (T.size() != model.num_cables()) throw ArgumentError("tension vector dimension mismatch");
  const Pose pose = pose_of(q);
  const MatX A = structure_matrix(model, pose);
  VecX Q = VecX::Zero(model.dof());
  Q.head<6>() = wrench_to_generalized(model, pose.euler, -A * T);
  return Q;
}

VecX inverse_dynamics(const RobotModel& model, const VecX& q, const VecX& qdot, const VecX& qddot,
                      const VecX& tau_d) {
  const DynTerms d = dyn_terms(model, q, qdot);
  if (qddot.size() != model.dof()) throw ArgumentError("qddot dimension mismatch");
  VecX tau = d.M * qddot + d.C * qdot + d.G;
  if (tau_d.size() > 0) {
    if (tau_d.size() != model.dof()) throw ArgumentError("tau_d dimension mismatch");
    tau += tau_d;
  }
  return tau;
}

VecX forward_dynamics_generalized(const RobotModel& model, const VecX& q, const VecX& qdot, const VecX& tau,
                                  const VecX& tau_d) {
  const DynTerms d = dyn_terms(model, q, qdot);
  if (tau.size() != model.dof()) throw ArgumentError("generalized force dimension mismatch");
  VecX rhs = tau - d.C * qdot - d.G;
  if (tau_d.size() > 0) {
    if (tau_d.size() != model.dof()) throw ArgumentError("tau_d dimension mismatch");
    rhs -= tau_d;
  }
  const VecX ev = Eigen::SelfAdjointEigenSolver<MatX>(d.M, Eigen::EigenvaluesOnly).eigenvalues();
  const double cond = ev.minCoeff() > 0.0 ? ev.maxCoeff() / ev.minCoeff() : std::numeric_limits<double>::infinity();
  if (cond > kMaxCondition) throw ConditioningError(cond);
  Eigen::LLT<MatX> llt(d.M);
  return llt.solve(rhs);
}

VecX forward_dynamics(const RobotModel& model, const VecX& q, const VecX& qdot, const VecX& T,
                      const VecX& tau_a, const VecX& tau_d) {
  if (tau_a.size() != model.num_joints()) throw ArgumentError("tau_a dimension mismatch");
  VecX tau = model.num_cables() > 0 ? cable_generalized_force(model, q, T) : VecX::Zero(model.dof());
  tau.tail(model.num_joints()) += tau_a;
  return forward_dynamics_generalized(model, q, qdot, tau, tau_d);
}

VecX tensions_from_lengths(const RobotModel& model, const VecX& L, const VecX& L0, bool clamp_slack) {
  const int n = model.num_cables();
  if (L0.size() != n || L.size() != n) throw ArgumentError("cable length dimension mismatch");
  VecX T(n);
  for (int i = 0; i < n; ++i) {
    if (!(L0[i] > 0.0)) throw ArgumentError("unstretched length of cable " + std::to_string(i + 1) + " must be positive");
    T[i] = model.platform.cables[i].EA / L0[i] * (L[i] - L0[i]);
    if (clamp_slack && T[i] < 0.0) T[i] = 0.0;
  }
  return T;
}

VecX cable_tensions_from_stretch(const RobotModel& model, const Pose& pose, const VecX& L0, bool clamp_slack) {
  return tensions_from_lengths(model, cable_geometry(model, pose).length, L0, clamp_slack);
}

}  // namespace hcdr
