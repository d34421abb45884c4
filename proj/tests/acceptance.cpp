// Acceptance checks AC1-AC11. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "hcdr/dynamics.hpp"
#include "hcdr/errors.hpp"
#include "hcdr/metrics.hpp"
#include "hcdr/quadrotor.hpp"
#include "hcdr/redundancy.hpp"
#include "hcdr/scenario.hpp"
#include "hcdr/sim.hpp"
#include "hcdr/stiffness.hpp"
#include "hcdr/trace_io.hpp"

using namespace hcdr;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

class Check {
 public:
  void require(bool cond, const std::string& what) {
    if (!cond && out_.ok) {
      out_.ok = false;
      out_.detail = what;
    }
  }
  void note(const std::string& s) {
    if (out_.ok) out_.detail += (out_.detail.empty() ? "" : "; ") + s;
  }
  Outcome outcome() const { return out_; }

 private:
  Outcome out_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

VecX uniform(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  VecX v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

VecX random_q(std::mt19937_64& rng) {
  VecX q(9);
  q << uniform(rng, 3, -0.2, 0.2), uniform(rng, 3, -0.5, 0.5), uniform(rng, 3, -3.0, 3.0);
  return q;
}

VecX start_state() {
  VecX x = VecX::Zero(10);
  x[0] = 0.05;
  x[2] = 0.1;
  return x;
}

VecX gravity_demand(const RobotModel& m, const VecX& q) {
  const VecX z = VecX::Zero(m.dof());
  return structure_wrench_demand(m, pose_of(q).euler, inverse_dynamics(m, q, z, z).head(6));
}

Outcome ac1() {
  Check c;
  const RobotModel m = builtin_hcdr9dof();
  std::mt19937_64 rng(101);
  double worst = 0.0, min_eig = INFINITY;
  for (int s = 0; s < 100; ++s) {
    const VecX q = random_q(rng), qd = uniform(rng, 9, -1, 1);
    const DynTerms d = dyn_terms(m, q, qd);
    const double h = 1e-6;
    const MatX Md = (mass_matrix(m, q + h * qd) - mass_matrix(m, q - h * qd)) / (2 * h);
    worst = std::max(worst, (Md - (d.C + d.C.transpose())).norm() / (1 + Md.norm()));
    c.require((d.M - d.M.transpose()).norm() <= 1e-12 * d.M.norm(), "M not symmetric");
    min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<MatX>(d.M).eigenvalues().minCoeff());
  }
  c.require(worst <= 1e-5, "skew residual " + fmt("%.3g", worst));
  c.require(min_eig > 0.0, "M not positive definite");
  c.note("max rel residual " + fmt("%.3g", worst) + ", min eig(M) " + fmt("%.4g", min_eig));
  return c.outcome();
}

Outcome ac2() {
  Check c;
  const RobotModel m = builtin_hcdr9dof();
  std::mt19937_64 rng(202);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const VecX q = random_q(rng), qd = uniform(rng, 9, -1, 1), qdd = uniform(rng, 9, -2, 2);
    const VecX tau = inverse_dynamics(m, q, qd, qdd);
    const VecX back = forward_dynamics_generalized(m, q, qd, tau);
    worst = std::max(worst, (back - qdd).norm() / qdd.norm());
  }
  c.require(worst <= 1e-8, "round trip error " + fmt("%.3g", worst));
  c.note("max rel error " + fmt("%.3g", worst));
  return c.outcome();
}

// All twelve cables elastic at fixed unstretched lengths, joints unactuated,
// planar initial velocity.
Outcome ac3() {
  Check c;
  const RobotModel m = builtin_hcdr9dof();
  const PlanarPlant plant(m);
  const VecX x0 = start_state();
  const VecX q0 = plant.q_of(x0);
  const PlanarTensionPlan plan = plan_planar_tensions(m, pose_of(q0), gravity_demand(m, q0));
  const VecX L0 = plan.L0;
  VecX s(18);
  VecX qd0 = VecX::Zero(9);
  qd0[0] = 0.05;
  qd0[2] = -0.03;
  qd0[4] = 0.1;
  qd0[7] = 0.5;
  qd0[8] = -0.4;
  s << q0, qd0;
  const VecX tau_a = VecX::Zero(3);
  const OdeFn f = [&](const VecX& y) {
    const VecX q = y.head(9), qd = y.tail(9);
    const VecX T = cable_tensions_from_stretch(m, pose_of(q), L0);
    VecX out(18);
    out << qd, forward_dynamics(m, q, qd, T, tau_a);
    return out;
  };
  auto energy = [&](const VecX& y) {
    const Energies e = energies(m, y.head(9), y.tail(9), L0);
    return e.kinetic + e.gravity + e.elastic;
  };
  const double E0 = energy(s);
  double drift = 0.0, min_T = INFINITY, swing = 0.0;
  for (int k = 0; k < 20000; ++k) {
    s = rk4_step(f, s, 1e-4);
    swing = std::max(swing, std::abs(s[8] - q0[8]));
    if (k % 100 == 99) {
      drift = std::max(drift, std::abs(energy(s) - E0) / std::abs(E0));
      min_T = std::min(min_T, cable_tensions_from_stretch(m, pose_of(s.head(9)), L0).minCoeff());
    }
  }
  c.require(drift <= 1e-4, "relative energy drift " + fmt("%.3g", drift));
  c.require(min_T > 0.0, "a cable went slack");
  c.note("relative drift " + fmt("%.3g", drift) + " over 2 s, E0 " + fmt("%.6g", E0) + " J, joint 3 swing " +
         fmt("%.3g", swing) + " rad");
  return c.outcome();
}

Outcome ac4() {
  Check c;
  const RobotModel m = builtin_hcdr9dof();
  const VecX q = PlanarPlant(m).q_of(start_state());
  const Pose pose = pose_of(q);
  const PlanarTensionPlan plan = plan_planar_tensions(m, pose, gravity_demand(m, q));
  std::vector<int> all(12);
  for (int i = 0; i < 12; ++i) all[i] = i;
  const CableGeometry g = cable_geometry(m, pose);
  const VecX T = tensions_from_lengths(m, g.length, plan.L0);
  const Mat6 K = stiffness_KT(g, T) + stiffness_Kk(m, pose, plan.L0, all);
  auto wrench = [&](const Vec3& p, const Mat3& R) {
    const CableGeometry gg = cable_geometry(m, p, R);
    return Vec6(structure_matrix(gg) * tensions_from_lengths(m, gg.length, plan.L0));
  };
  const Mat3 R = rotation(pose.euler);
  const double h = 1e-6;
  Mat6 fd;
  for (int k = 0; k < 6; ++k) {
    Vec3 dp = Vec3::Zero(), dth = Vec3::Zero();
    (k < 3 ? dp[k] : dth[k - 3]) = h;
    fd.col(k) = (wrench(pose.p + dp, so3_exp(dth) * R) - wrench(pose.p - dp, so3_exp(-dth) * R)) / (2 * h);
  }
  const double rel = (K - fd).norm() / fd.norm();
  c.require(rel <= 1e-4, "relative mismatch " + fmt("%.3g", rel));
  c.note("relative mismatch " + fmt("%.3g", rel));
  return c.outcome();
}

Outcome ac5() {
  Check c;
  const RobotModel m = builtin_hcdr9dof();
  const int n = 76;
  const auto grid = stiffness_map(m, Pose{}, 1.005, 1.005, n);
  c.require(static_cast<int>(grid.size()) == n * n, "grid size");
  double min_eig = INFINITY;
  int best = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto& p = grid[a * n + b];
      min_eig = std::min(min_eig, p.min_eig);
      if (a + 1 < n) c.require(grid[(a + 1) * n + b].JK >= p.JK, "J_K decreases along T3");
      if (b + 1 < n) c.require(grid[a * n + b + 1].JK >= p.JK, "J_K decreases along T4");
      if (p.JK > grid[best].JK) best = a * n + b;
    }
  c.require(min_eig > 0.0, "non-positive eigenvalue");
  c.require(grid[best].T3 == 80.0 && grid[best].T4 == 80.0, "argmax not at the upper corner");
  c.note("J_K " + fmt("%.6g", grid.front().JK) + " -> " + fmt("%.6g", grid.back().JK) + ", min eig " +
         fmt("%.4g", min_eig));
  return c.outcome();
}

Outcome ac6() {
  Check c;
  const RobotModel m = builtin_hcdr9dof();
  std::mt19937_64 rng(606);
  double worst = 0.0;
  for (int s = 0; s < 50; ++s) {
    const MatX A = structure_matrix(m, pose_of(random_q(rng)));
    worst = std::max(worst, (A * null_space(A)).norm());
  }
  c.require(worst <= 1e-10, "||A N|| = " + fmt("%.3g", worst));
  const PlanarPlant coupled(m), platform(platform_only(m));
  const Trajectory tr = case_study_trajectory();
  double lo = INFINITY, hi = -INFINITY;
  for (int k = 0; k <= 600; ++k) {
    for (bool decoupled : {false, true}) {
      const ReferencePoint r = reference_point(coupled, platform, tr, 0.01 * k, decoupled);
      lo = std::min(lo, r.tensions.minCoeff());
      hi = std::max(hi, r.tensions.maxCoeff());
    }
  }
  c.require(lo >= 5.0 - 1e-9 && hi <= 80.0 + 1e-9, "tension range [" + fmt("%.6g", lo) + ", " + fmt("%.6g", hi) + "]");
  c.note("max ||A N|| " + fmt("%.3g", worst) + ", plan tensions in [" + fmt("%.4g", lo) + ", " + fmt("%.4g", hi) +
         "] N");
  return c.outcome();
}

MpcWindow constant_window(const MpcStage& s, int Np) {
  MpcWindow w;
  w.stages.assign(Np, s);
  w.x_ref_end = s.x_ref;
  return w;
}

Outcome ac7() {
  Check c;
  const RobotModel m = builtin_hcdr9dof();
  const PlanarPlant coupled(m), platform(platform_only(m));
  const Trajectory hold = quintic_trajectory({{0.0, start_state()}, {1.0, start_state()}});
  double worst_fp = 0.0;
  for (auto a : {Architecture::kIndependent, Architecture::kIntegratedI, Architecture::kIntegratedII}) {
    const SimConfig cfg = default_config(a);
    const bool dec = a == Architecture::kIndependent;
    const int ns = a == Architecture::kIntegratedII ? 10 : 6, nu = ns == 10 ? 4 : 2;
    const ReferencePoint r = reference_point(coupled, platform, hold, 0.0, dec);
    const PlanarPlant& p = dec ? platform : coupled;
    const PlantFn f = [&](const VecX& x, const VecX& u) { return p.derivative(x, u, r.L01, r.L02); };
    LtvModel lin = dec ? linearize(f, r.x.head(6), r.u.head(2)) : linearize(f, r.x, r.u);
    if (!dec) lin = restrict_ltv(lin, ns, nu);
    const DiscreteLtv d = discretize(lin.A, lin.B, cfg.mpc.Ts);
    MpcStage st{d.Ad, d.Bd, d.Ed * lin.f_ref, r.x.head(ns), r.u.head(nu)};
    const MpcSolution sol = mpc_step(constant_window(st, cfg.mpc.Np), r.x.head(ns), r.u.head(nu), cfg.mpc);
    worst_fp = std::max(worst_fp, (sol.u - r.u.head(nu)).cwiseAbs().maxCoeff());
  }
  c.require(worst_fp <= 1e-8, "fixed point error " + fmt("%.3g", worst_fp));

  // Unconstrained oracle: the cost is a sum of squares affine in the increments.
  std::mt19937_64 rng(707);
  double worst_or = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int ns = 4, nu = 2, Np = 1 + trial % 5, Nc = 1 + trial % Np;
    MpcParams p;
    p.Np = Np;
    p.Nc = Nc;
    p.Q = MatX::Identity(ns, ns);
    p.P = 2.0 * p.Q;
    p.R = 0.05 * MatX::Identity(nu, nu);
    MpcWindow w;
    for (int j = 0; j < Np; ++j)
      w.stages.push_back({MatX::Identity(ns, ns) + 0.1 * MatX::Random(ns, ns), MatX::Random(ns, nu),
                          uniform(rng, ns, -0.1, 0.1), uniform(rng, ns, -1, 1), uniform(rng, nu, -1, 1)});
    w.x_ref_end = uniform(rng, ns, -1, 1);
    const VecX x0 = uniform(rng, ns, -1, 1), up = uniform(rng, nu, -1, 1);
    auto residual = [&](const VecX& du) {
      VecX r((Np + 1) * ns + Np * nu);
      VecX e = x0 - w.stages[0].x_ref, u = up;
      r.head(ns) = e;
      for (int j = 0; j < Np; ++j) {
        if (j < Nc) u += du.segment(j * nu, nu);
        const VecX ut = u - w.stages[j].u_ref;
        e = w.stages[j].Ad * e + w.stages[j].Bd * ut + w.stages[j].d;
        r.segment((j + 1) * ns, ns) = (j + 1 == Np ? std::sqrt(2.0) : 1.0) * e;
        r.segment((Np + 1) * ns + j * nu, nu) = std::sqrt(0.05) * ut;
      }
      return r;
    };
    const VecX r0 = residual(VecX::Zero(Nc * nu));
    MatX J(r0.size(), Nc * nu);
    for (int k = 0; k < Nc * nu; ++k) J.col(k) = residual(VecX::Unit(Nc * nu, k)) - r0;
    const VecX du = (J.transpose() * J).ldlt().solve(-J.transpose() * r0);
    worst_or = std::max(worst_or, (mpc_step(w, x0, up, p).du - du).norm() / du.norm());
  }
  c.require(worst_or <= 1e-6, "oracle mismatch " + fmt("%.3g", worst_or));

  // Bound activation with the default limits. The tension range [5, 80] is
  // narrower than one increment bound, so it is the absolute bound that goes
  // active; with it removed the increment is clipped at 80 N.
  MpcParams mp = default_config(Architecture::kIntegratedI).mpc;
  const ReferencePoint r = reference_point(coupled, platform, hold, 0.0, false);
  const PlantFn f = [&](const VecX& x, const VecX& u) { return coupled.derivative(x, u, r.L01, r.L02); };
  const LtvModel lin = restrict_ltv(linearize(f, r.x, r.u), 6, 2);
  const DiscreteLtv d = discretize(lin.A, lin.B, mp.Ts);
  const MpcWindow w = constant_window({d.Ad, d.Bd, d.Ed * lin.f_ref, r.x.head(6), r.u.head(2)}, mp.Np);
  VecX x0 = r.x.head(6);
  x0[2] -= 5.0;
  const VecX up = Eigen::Vector2d(80.0, 80.0);
  auto input_range = [&](const MpcSolution& sol) {
    VecX u = up;
    double lo = INFINITY, hi = -INFINITY;
    for (int j = 0; j < mp.Nc; ++j) {
      u += sol.du.segment(2 * j, 2);
      lo = std::min(lo, u.minCoeff());
      hi = std::max(hi, u.maxCoeff());
    }
    return std::pair{lo, hi};
  };
  const MpcSolution bounded = mpc_step(w, x0, up, mp);
  const auto [ulo, uhi] = input_range(bounded);
  c.require(ulo >= 5.0 - 1e-9 && uhi <= 80.0 + 1e-9, "tension bound violated");
  c.require(std::abs(ulo - 5.0) <= 1e-9, "tension bound not active, range [" + fmt("%.6g", ulo) + ", " +
                                             fmt("%.6g", uhi) + "]");
  c.require(bounded.du.cwiseAbs().maxCoeff() <= 80.0 + 1e-9, "increment bound violated");
  mp.u_lo = VecX();
  mp.u_hi = VecX();
  const MpcSolution clipped = mpc_step(w, x0, up, mp);
  const double du_max = clipped.du.cwiseAbs().maxCoeff();
  c.require(du_max <= 80.0 + 1e-9, "increment bound violated");
  c.require(std::abs(du_max - 80.0) <= 1e-9, "increment bound not active, |du|max " + fmt("%.6g", du_max));
  c.note("fixed point " + fmt("%.3g", worst_fp) + ", oracle " + fmt("%.3g", worst_or) + ", |du|max " +
         fmt("%.6g", du_max));
  return c.outcome();
}

Outcome ac8() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const RobotModel m = builtin_hcdr9dof();
  const Trajectory tr = case_study_trajectory();
  EvalReport rep[3];
  const Architecture arch[3] = {Architecture::kIndependent, Architecture::kIntegratedI, Architecture::kIntegratedII};
  for (int i = 0; i < 3; ++i) rep[i] = evaluate_trace(simulate(m, tr, default_config(arch[i])));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(rep[2].rmse_2d < rep[1].rmse_2d, "IntegratedII not better than IntegratedI");
  c.require(rep[1].rmse_2d < rep[0].rmse_2d, "IntegratedI not better than Independent");
  c.require(rep[0].rmse_z > rep[0].rmse_x, "Independent error not dominated by Z");
  c.require(secs < 300.0, "runtime " + fmt("%.1f", secs) + " s");
  c.note("RMSE_2D independent " + fmt("%.4g", rep[0].rmse_2d) + " (x " + fmt("%.3g", rep[0].rmse_x) + ", z " +
         fmt("%.3g", rep[0].rmse_z) + "), integrated1 " + fmt("%.4g", rep[1].rmse_2d) + ", integrated2 " +
         fmt("%.4g", rep[2].rmse_2d) + " m; " + fmt("%.1f", secs) + " s");
  return c.outcome();
}

Outcome ac9() {
  Check c;
  const auto [quad, model] = builtin_quadrotor_arm();
  const VecX q = VecX::Zero(model.dof()), z = VecX::Zero(model.dof());
  const Eigen::Vector4d F = hover_thrusts(model);
  double mass = model.platform.mass;
  for (const ArmLink& l : model.arm) mass += l.mass;
  c.require((F.array() - mass * model.gravity / 4.0).abs().maxCoeff() <= 1e-12, "hover thrusts are not m g / 4");
  const VecX qdd = hybrid_forward_dynamics_quadrotor(quad, model, q, z, F, gravity_vector(model, q).tail(2));
  c.require(qdd.norm() <= 1e-9, "hover residual " + fmt("%.3g", qdd.norm()));
  const double d = quad.arm_length, k = quad.moment_ratio;
  Eigen::Matrix<double, 6, 4> expected;
  expected << 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 0, d, 0, -d, -d, 0, d, 0, k, -k, k, -k;
  c.require(quadrotor_structure_matrix(quad, Pose{}).reduced == MatX(expected), "level block differs");
  c.note("hover residual " + fmt("%.3g", qdd.norm()));
  return c.outcome();
}

Outcome ac10() {
  Check c;
  const Trajectory tr = case_study_trajectory();
  double pos = 0.0, der = 0.0;
  for (const Waypoint& w : tr.waypoints()) {
    const TrajectorySample s = tr.sample(w.t);
    for (int k = 0; k < 5; ++k) {
      pos = std::max(pos, std::abs(s.x[2 * k] - w.x[2 * k]));
      der = std::max({der, std::abs(s.x[2 * k + 1]), std::abs(s.acc[k])});
    }
  }
  c.require(pos <= 1e-9 && der <= 1e-9, "knot mismatch");
  const double th3 = tr.sample(3.0).x[8], th2 = tr.sample(5.0).x[6];
  c.require(std::abs(th3 - 0.6) <= 1e-9, "theta_a3(t_B) = " + fmt("%.12g", th3));
  c.require(std::abs(th2 - 0.8) <= 1e-9, "theta_a2(t_C) = " + fmt("%.12g", th2));
  c.note("knot error " + fmt("%.3g", std::max(pos, der)));
  return c.outcome();
}

Outcome ac11() {
  Check c;
  const std::string doc = R"({"model": "hcdr9dof", "architecture": "integrated1", "trajectory": "case_study",
    "t_end_s": 1.0, "noise": {"std": [0.5, 0.5, 0.02, 0.02]}, "seed": 7})";
  auto artifacts = [&] {
    const Scenario s = load_scenario(doc);
    const SimTrace tr = simulate(s.model, scenario_trajectory(s), s.config);
    return trace_csv(tr) + trace_json(tr).dump() +
           summary_json(evaluate_trace(tr), s.config.seed, config_hash(s)).dump(2);
  };
  const std::string a = artifacts(), b = artifacts();
  c.require(a == b, "artifacts differ");
  c.note(std::to_string(a.size()) + " bytes identical");
  return c.outcome();
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> checks[] = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},   {"AC5", ac5},  {"AC6", ac6},
      {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11}};
  int failed = 0;
  for (const auto& [name, fn] : checks) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s  %s\n", name, o.ok ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += o.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
