#include "hcdr/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "hcdr/errors.hpp"
#include "hcdr/redundancy.hpp"

namespace hcdr {

std::string architecture_name(Architecture a) {
  switch (a) {
    case Architecture::kIndependent: return "independent";
    case Architecture::kIntegratedI: return "integrated1";
    case Architecture::kIntegratedII: return "integrated2";
  }
  return "unknown";
}

Architecture architecture_from_string(const std::string& s) {
  if (s == "independent") return Architecture::kIndependent;
  if (s == "integrated1") return Architecture::kIntegratedI;
  if (s == "integrated2") return Architecture::kIntegratedII;
  throw ArgumentError("unknown architecture '" + s + "' (expected independent, integrated1 or integrated2)");
}

VecX rk4_step(const OdeFn& f, const VecX& x, double dt) {
  if (!(dt > 0.0)) throw ArgumentError("rk4 step must be positive");
  const VecX k1 = f(x);
  const VecX k2 = f(x + 0.5 * dt * k1);
  const VecX k3 = f(x + 0.5 * dt * k2);
  const VecX k4 = f(x + dt * k3);
  VecX out = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!out.allFinite()) throw DivergenceError("integrator produced a non-finite state");
  return out;
}

SimConfig default_config(Architecture a) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  SimConfig c;
  c.architecture = a;
  MpcParams& p = c.mpc;
  p.Ts = 0.01;
  p.Np = 50;
  p.Nc = 50;
  const int ns = a == Architecture::kIntegratedII ? 10 : 6;
  const int nu = a == Architecture::kIntegratedII ? 4 : 2;
  p.Q = MatX::Identity(ns, ns);
  p.P = MatX::Identity(ns, ns);
  p.R = 1e-4 * MatX::Identity(nu, nu);
  p.dx_lo = VecX::Constant(ns, -inf);
  p.dx_hi = VecX::Constant(ns, inf);
  p.du_hi = VecX::Constant(nu, 80.0);
  p.u_lo = VecX::Constant(nu, -inf);
  p.u_hi = VecX::Constant(nu, inf);
  if (nu == 4) p.du_hi.tail(2).setConstant(2.0);
  p.du_lo = -p.du_hi;
  p.u_lo.head(2).setConstant(5.0);
  p.u_hi.head(2).setConstant(80.0);
  return c;
}

namespace {

VecX q_full(const VecX& x10) {
  VecX q = VecX::Zero(9);
  q << x10[0], 0.0, x10[2], 0.0, x10[4], 0.0, 0.0, x10[6], x10[8];
  return q;
}

VecX qd_full(const VecX& x10) {
  VecX qd = VecX::Zero(9);
  qd << x10[1], 0.0, x10[3], 0.0, x10[5], 0.0, 0.0, x10[7], x10[9];
  return qd;
}

VecX qdd_full(const VecX& acc5) {
  VecX a = VecX::Zero(9);
  a << acc5[0], 0.0, acc5[1], 0.0, acc5[2], 0.0, 0.0, acc5[3], acc5[4];
  return a;
}

VecX state_rate(const TrajectorySample& s) {
  VecX xd(10);
  for (int k = 0; k < 5; ++k) {
    xd[2 * k] = s.x[2 * k + 1];
    xd[2 * k + 1] = s.acc[k];
  }
  return xd;
}

std::vector<int> tension_group_cables(const RobotModel& m, int id) {
  auto it = m.platform.actuator_groups.find(id);
  if (it == m.platform.actuator_groups.end()) throw ArgumentError("missing actuator group " + std::to_string(id));
  return it->second;
}

// Tension limits shared by every cable of a tension-controlled group.
std::pair<double, double> group_limits(const RobotModel& m, int id) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (int i : tension_group_cables(m, id)) {
    lo = std::max(lo, m.platform.cables[i].Tmin);
    hi = std::min(hi, m.platform.cables[i].Tmax);
  }
  return {lo, hi};
}

struct Stage {
  ReferencePoint ref;
  VecX xdot_ref;
  MpcStage mpc;
};

std::string at_time(double t) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "t=%.4f s: ", t);
  return buf;
}

}  // namespace

ReferencePoint reference_point(const PlanarPlant& coupled, const PlanarPlant& platform, const Trajectory& traj,
                               double t, bool decoupled, const OptimizerOptions& opt) {
  if (traj.state_dim() != 10) throw ArgumentError("reference trajectory must have 10 states");
  const TrajectorySample s = traj.sample(t);
  ReferencePoint r;
  r.t = t;
  r.x = s.x;

  const RobotModel& full = coupled.model();
  const VecX q = q_full(s.x);
  const VecX tau = inverse_dynamics(full, q, qd_full(s.x), qdd_full(s.acc));
  const Pose pose = pose_of(q);

  VecX tau_platform;
  const RobotModel* plan_model = &full;
  if (decoupled) {
    plan_model = &platform.model();
    const VecX qp = q.head(6);
    const VecX qdp = qd_full(s.x).head(6);
    const VecX qddp = qdd_full(s.acc).head(6);
    tau_platform = inverse_dynamics(*plan_model, qp, qdp, qddp);
  } else {
    tau_platform = tau.head(6);
  }
  const VecX tau_m = structure_wrench_demand(*plan_model, pose.euler, tau_platform);
  const PlanarTensionPlan plan = plan_planar_tensions(*plan_model, pose, tau_m, opt, coupled.split());

  r.u = VecX(4);
  r.u << plan.T3, plan.T4, tau[7], tau[8];
  r.L01 = plan.L01;
  r.L02 = plan.L02;
  r.L0 = plan.L0;
  r.tensions = plan.stiffness.T;
  return r;
}

SimTrace simulate(const RobotModel& model, const Trajectory& traj, const SimConfig& cfg) {
  const Architecture arch = cfg.architecture;
  const bool full_mpc = arch == Architecture::kIntegratedII;
  const int ns = full_mpc ? 10 : 6;
  const int nu = full_mpc ? 4 : 2;
  const MpcParams& mp = cfg.mpc;
  mp.validate(ns, nu);
  if (!(cfg.t_end > 0.0)) throw ValidationError("t_end must be positive");
  if (cfg.substeps < 1) throw ValidationError("substeps must be at least 1");
  if (cfg.noise.std_dev.size() != 0 && cfg.noise.std_dev.size() != 4)
    throw ValidationError("noise std_dev needs 4 entries [T3, T4, tau2, tau3]");
  if (cfg.noise.std_dev.size() != 0 && (cfg.noise.std_dev.array() < 0.0).any())
    throw ValidationError("noise std_dev must be non-negative");

  const PlanarPlant coupled(model);
  const PlanarPlant platform(platform_only(model));
  if (!coupled.has_arm()) throw ValidationError("simulation requires a model with an arm");

  const int K = static_cast<int>(std::llround(cfg.t_end / mp.Ts));
  const int horizon = K + mp.Np;
  const bool decoupled = arch == Architecture::kIndependent;

  std::vector<Stage> stages(horizon + 1);
  for (int j = 0; j <= horizon; ++j) {
    const double t = j * mp.Ts;
    Stage& st = stages[j];
    try {
      st.ref = reference_point(coupled, platform, traj, t, decoupled, cfg.stiffness);
      st.xdot_ref = state_rate(traj.sample(t));
      if (j == horizon) break;
      const ReferencePoint& r = st.ref;
      LtvModel lin;
      if (decoupled) {
        const PlantFn f = [&](const VecX& x, const VecX& u) { return platform.derivative(x, u, r.L01, r.L02); };
        lin = linearize(f, r.x.head(6), r.u.head(2));
      } else {
        const PlantFn f = [&](const VecX& x, const VecX& u) { return coupled.derivative(x, u, r.L01, r.L02); };
        lin = linearize(f, r.x, r.u);
        if (!full_mpc) lin = restrict_ltv(lin, ns, nu);
      }
      const DiscreteLtv dl = discretize(lin.A, lin.B, mp.Ts);
      st.mpc.Ad = dl.Ad;
      st.mpc.Bd = dl.Bd;
      st.mpc.d = dl.Ed * (lin.f_ref - st.xdot_ref.head(ns));
      st.mpc.x_ref = r.x.head(ns);
      st.mpc.u_ref = r.u.head(nu);
    } catch (const Error& e) {
      throw Error(e.category(), at_time(t) + "reference: " + e.what());
    }
  }

  const auto lim3 = group_limits(model, coupled.split().tension_group_1);
  const auto lim4 = group_limits(model, coupled.split().tension_group_2);
  const std::vector<int> upper = [&] {
    std::vector<int> u;
    for (int g : {coupled.split().length_group_1, coupled.split().length_group_2})
      for (int i : tension_group_cables(model, g)) u.push_back(i);
    return u;
  }();

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const bool noisy = cfg.noise.std_dev.size() == 4 && (cfg.noise.std_dev.array() > 0.0).any();

  SimTrace tr;
  VecX x = stages[0].ref.x;
  VecX u_prev = stages[0].ref.u.head(nu);
  PidState pid;
  const double dt = mp.Ts / cfg.substeps;

  for (int k = 0; k <= K; ++k) {
    const double t = k * mp.Ts;
    const ReferencePoint& r = stages[k].ref;
    MpcSolution sol;
    try {
      MpcWindow w;
      w.stages.reserve(mp.Np);
      for (int j = 0; j < mp.Np; ++j) w.stages.push_back(stages[k + j].mpc);
      w.x_ref_end = stages[k + mp.Np].ref.x.head(ns);
      sol = mpc_step(w, x.head(ns), u_prev, mp, cfg.qp);
      u_prev = sol.u;
    } catch (const Error& e) {
      throw Error(e.category(), at_time(t) + "controller: " + e.what());
    }

    VecX noise = VecX::Zero(4);
    if (noisy)
      for (int c = 0; c < 4; ++c) noise[c] = cfg.noise.std_dev[c] * normal(rng);

    // The MPC move is held over the period; the joint PID runs at the
    // integration rate against the reference at each substep.
    auto input_at = [&](int sub) {
      VecX u(4);
      if (full_mpc) {
        u = sol.u;
      } else {
        const double ts = t + sub * dt;
        const VecX xr = sub == 0 ? r.x : traj.sample(ts).x;
        const Eigen::Vector2d th_r(xr[6], xr[8]), dth_r(xr[7], xr[9]);
        const Eigen::Vector2d th(x[6], x[8]), dth(x[7], x[9]);
        const PidOutput po = pid_step(th_r, dth_r, th, dth, pid, cfg.pid, dt, cfg.pid_torque_limit);
        pid = po.state;
        u << sol.u, po.tau;
      }
      u += noise;
      u[0] = std::clamp(u[0], lim3.first, lim3.second);
      u[1] = std::clamp(u[1], lim4.first, lim4.second);
      return u;
    };

    VecX u;
    try {
      u = input_at(0);
    } catch (const Error& e) {
      throw Error(e.category(), at_time(t) + "controller: " + e.what());
    }

    const VecX q = q_full(x);
    const VecX qd = qd_full(x);
    const Energies en = energies(model, q, qd, r.L0, upper);
    tr.t.push_back(t);
    tr.x.push_back(x);
    tr.u.push_back(u);
    tr.T.push_back(coupled.tensions(x, u, r.L01, r.L02));
    tr.L01.push_back(r.L01);
    tr.L02.push_back(r.L02);
    tr.KE.push_back(en.kinetic);
    tr.VE.push_back(en.gravity + en.elastic);
    tr.x_ref.push_back(r.x);
    tr.pe.push_back(coupled.end_effector_xz(x));
    tr.pe_ref.push_back(coupled.end_effector_xz(r.x));
    tr.u_ref.push_back(r.u);

    if (k == K) break;
    for (int sub = 0; sub < cfg.substeps; ++sub) {
      if (sub > 0) {
        try {
          u = input_at(sub);
        } catch (const Error& e) {
          throw Error(e.category(), at_time(t + sub * dt) + "controller: " + e.what());
        }
      }
      const OdeFn f = [&](const VecX& s) { return coupled.derivative(s, u, r.L01, r.L02); };
      try {
        x = rk4_step(f, x, dt);
      } catch (const Error& e) {
        throw Error(e.category(), at_time(t + sub * dt) + "plant: " + e.what());
      }
    }
  }
  return tr;
}

}  // namespace hcdr
