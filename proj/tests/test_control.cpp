#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "hcdr/control.hpp"
#include "hcdr/errors.hpp"
#include "support.hpp"

using namespace hcdr;
using namespace hcdr::test;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MpcParams unconstrained(int ns, int nu, int Np, int Nc) {
  MpcParams p;
  p.Np = Np;
  p.Nc = Nc;
  p.Q = MatX::Identity(ns, ns);
  p.P = 3.0 * MatX::Identity(ns, ns);
  p.R = 0.1 * MatX::Identity(nu, nu);
  return p;
}

MpcWindow random_window(std::mt19937_64& rng, int ns, int nu, int Np) {
  MpcWindow w;
  for (int j = 0; j < Np; ++j) {
    MpcStage s;
    s.Ad = MatX::Identity(ns, ns) + 0.1 * MatX::Random(ns, ns);
    s.Bd = MatX::Random(ns, nu);
    s.d = uniform(rng, ns, -0.1, 0.1);
    s.x_ref = uniform(rng, ns, -1, 1);
    s.u_ref = uniform(rng, nu, -1, 1);
    w.stages.push_back(s);
  }
  w.x_ref_end = uniform(rng, ns, -1, 1);
  return w;
}

// Weighted residual stack for a given increment sequence, by forward
// simulation of the deviation dynamics.
VecX residual(const MpcWindow& w, const MpcParams& p, const VecX& x0, const VecX& u_prev, const VecX& du) {
  const int ns = static_cast<int>(x0.size()), nu = static_cast<int>(u_prev.size());
  auto sqrtm = [](const MatX& M) { return MatX(Eigen::SelfAdjointEigenSolver<MatX>(M).operatorSqrt()); };
  const MatX Qh = sqrtm(p.Q), Ph = sqrtm(p.P), Rh = sqrtm(p.R);
  VecX r((p.Np + 1) * ns + p.Np * nu);
  VecX e = x0 - w.stages[0].x_ref;
  VecX u = u_prev;
  r.head(ns) = Qh * e;
  for (int j = 0; j < p.Np; ++j) {
    if (j < p.Nc) u += du.segment(j * nu, nu);
    const VecX ut = u - w.stages[j].u_ref;
    e = w.stages[j].Ad * e + w.stages[j].Bd * ut + w.stages[j].d;
    r.segment((j + 1) * ns, ns) = (j + 1 == p.Np ? Ph : Qh) * e;
    r.segment((p.Np + 1) * ns + j * nu, nu) = Rh * ut;
  }
  return r;
}

}  // namespace

TEST(Linearize, DoubleIntegratorIsExact) {
  const PlantFn f = [](const VecX& x, const VecX& u) {
    VecX d(2);
    d << x[1], u[0];
    return d;
  };
  const LtvModel m = linearize(f, Eigen::Vector2d(0.3, -1.2), VecX::Constant(1, 0.7));
  MatX A(2, 2), B(2, 1);
  A << 0, 1, 0, 0;
  B << 0, 1;
  EXPECT_LE((m.A - A).norm(), 1e-9);
  EXPECT_LE((m.B - B).norm(), 1e-9);
  EXPECT_LE((m.C - MatX::Identity(2, 2)).norm(), 0.0);
  EXPECT_NEAR(m.f_ref[0], -1.2, 1e-15);
}

TEST(Linearize, EquilibriumHasZeroOffset) {
  const PlantFn f = [](const VecX& x, const VecX& u) {
    VecX d(2);
    d << x[1], -std::sin(x[0]) + u[0];
    return d;
  };
  const LtvModel m = linearize(f, Eigen::Vector2d(0.4, 0.0), VecX::Constant(1, std::sin(0.4)));
  EXPECT_LE(m.f_ref.norm(), 1e-8);
  EXPECT_NEAR(m.A(1, 0), -std::cos(0.4), 1e-8);
}

TEST(Linearize, ColumnsMatchHalfStepDifferences) {
  const PlantFn f = [](const VecX& x, const VecX& u) {
    VecX d(3);
    d << std::exp(0.3 * x[1]) * u[0], x[0] * x[2] - std::cos(u[1]), std::tanh(x[0] + u[0] * u[1]);
    return d;
  };
  const VecX x0 = Eigen::Vector3d(0.2, -0.5, 1.1), u0 = Eigen::Vector2d(0.7, -0.3);
  const LtvModel m = linearize(f, x0, u0);
  for (int k = 0; k < 3; ++k) {
    const double h = 0.5e-6 * std::max(1.0, std::abs(x0[k]));
    VecX dx = VecX::Zero(3);
    dx[k] = h;
    const VecX col = (f(x0 + dx, u0) - f(x0 - dx, u0)) / (2 * h);
    EXPECT_LE((m.A.col(k) - col).norm(), 4 * 1e-8);
  }
  for (int k = 0; k < 2; ++k) {
    const double h = 0.5e-6 * std::max(1.0, std::abs(u0[k]));
    VecX du = VecX::Zero(2);
    du[k] = h;
    const VecX col = (f(x0, u0 + du) - f(x0, u0 - du)) / (2 * h);
    EXPECT_LE((m.B.col(k) - col).norm(), 4 * 1e-8);
  }
}

TEST(Linearize, NonFinitePlantThrows) {
  const PlantFn f = [](const VecX& x, const VecX&) { return VecX::Constant(x.size(), std::nan("")); };
  EXPECT_THROW(linearize(f, VecX::Zero(2), VecX::Zero(1)), Error);
}

TEST(Discretize, DoubleIntegratorZeroOrderHold) {
  MatX A(2, 2), B(2, 1);
  A << 0, 1, 0, 0;
  B << 0, 1;
  const double T = 0.01;
  const DiscreteLtv d = discretize(A, B, T);
  MatX Ad(2, 2), Bd(2, 1), Ed(2, 2);
  Ad << 1, T, 0, 1;
  Bd << T * T / 2, T;
  Ed << T, T * T / 2, 0, T;
  EXPECT_LE((d.Ad - Ad).norm(), 1e-14);
  EXPECT_LE((d.Bd - Bd).norm(), 1e-14);
  EXPECT_LE((d.Ed - Ed).norm(), 1e-14);
}

TEST(Discretize, MatchesExponentialOfGeneralSystem) {
  const MatX A = MatX::Random(4, 4);
  const double T = 0.05;
  const DiscreteLtv d = discretize(A, MatX::Random(4, 2), T);
  const MatX E = (A * T).exp();
  EXPECT_LE((d.Ad - E).norm(), 1e-12);
  EXPECT_LE((A * d.Ed - (E - MatX::Identity(4, 4))).norm(), 1e-12);
}

TEST(Mpc, FixedPointAtReference) {
  std::mt19937_64 rng(4);
  for (auto [ns, nu] : {std::pair{6, 2}, std::pair{10, 4}}) {
    MpcWindow w = random_window(rng, ns, nu, 20);
    for (auto& s : w.stages) {
      s.d.setZero();
      s.u_ref = w.stages[0].u_ref;
    }
    MpcParams p = unconstrained(ns, nu, 20, 10);
    p.du_lo = VecX::Constant(nu, -80);
    p.du_hi = VecX::Constant(nu, 80);
    const MpcSolution s = mpc_step(w, w.stages[0].x_ref, w.stages[0].u_ref, p);
    EXPECT_LE((s.u - w.stages[0].u_ref).norm(), 1e-8);
    EXPECT_LE(s.du.norm(), 1e-8);
  }
}

TEST(Mpc, UnconstrainedMatchesBatchLeastSquares) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const int ns = 3, nu = 2, Np = 3 + trial % 3, Nc = 1 + trial % Np;
    const MpcWindow w = random_window(rng, ns, nu, Np);
    const MpcParams p = unconstrained(ns, nu, Np, Nc);
    const VecX x0 = uniform(rng, ns, -1, 1), up = uniform(rng, nu, -1, 1);
    // The residual is affine in du: r = r0 + J du.
    const VecX r0 = residual(w, p, x0, up, VecX::Zero(Nc * nu));
    MatX J(r0.size(), Nc * nu);
    for (int k = 0; k < Nc * nu; ++k) J.col(k) = residual(w, p, x0, up, VecX::Unit(Nc * nu, k)) - r0;
    const VecX du = (J.transpose() * J).ldlt().solve(-J.transpose() * r0);
    const MpcSolution s = mpc_step(w, x0, up, p);
    EXPECT_LE((s.du - du).norm() / du.norm(), 1e-6);
    EXPECT_NEAR(s.cost, residual(w, p, x0, up, du).squaredNorm(), 1e-8 * (1 + s.cost));
  }
}

TEST(Mpc, IncrementBoundClipsFirstMove) {
  // A large tracking error drives the unconstrained first move past 80.
  const int ns = 2, nu = 1;
  MpcWindow w;
  for (int j = 0; j < 5; ++j) {
    MpcStage s;
    s.Ad = MatX::Identity(2, 2);
    s.Ad(0, 1) = 0.01;
    s.Bd = MatX(2, 1);
    s.Bd << 5e-5, 0.01;
    s.d = VecX::Zero(2);
    s.x_ref = VecX::Zero(2);
    s.u_ref = VecX::Zero(1);
    w.stages.push_back(s);
  }
  w.x_ref_end = VecX::Zero(2);
  MpcParams p = unconstrained(ns, nu, 5, 5);
  p.R = 1e-6 * MatX::Identity(1, 1);
  const VecX x0 = Eigen::Vector2d(100.0, 0.0);
  const MpcSolution free = mpc_step(w, x0, VecX::Zero(1), p);
  ASSERT_LT(free.du[0], -80.0);
  p.du_lo = VecX::Constant(1, -80.0);
  p.du_hi = VecX::Constant(1, 80.0);
  const MpcSolution clipped = mpc_step(w, x0, VecX::Zero(1), p);
  EXPECT_NEAR(clipped.du[0], -80.0, 1e-9);
  EXPECT_GE(clipped.du.minCoeff(), -80.0 - 1e-9);
  EXPECT_LE(clipped.du.maxCoeff(), 80.0 + 1e-9);
  EXPECT_GE(clipped.cost, free.cost);
}

TEST(Mpc, AbsoluteAndStateIncrementBounds) {
  std::mt19937_64 rng(8);
  const MpcWindow w = random_window(rng, 2, 1, 4);
  MpcParams p = unconstrained(2, 1, 4, 4);
  const VecX x0 = Eigen::Vector2d(0.5, -0.5), up = VecX::Constant(1, 0.2);
  const MpcSolution free = mpc_step(w, x0, up, p);
  p.u_lo = VecX::Constant(1, 0.0);
  p.u_hi = VecX::Constant(1, 0.3);
  p.dx_lo = VecX::Constant(2, -kInf);
  p.dx_hi = VecX::Constant(2, kInf);
  const MpcSolution s = mpc_step(w, x0, up, p);
  VecX u = up;
  for (int j = 0; j < 4; ++j) {
    u += s.du.segment(j, 1);
    EXPECT_GE(u[0], -1e-9);
    EXPECT_LE(u[0], 0.3 + 1e-9);
  }
  EXPECT_GE(s.cost, free.cost - 1e-12);
}

TEST(Mpc, ValidationRejectsBadParameters) {
  std::mt19937_64 rng(1);
  const MpcWindow w = random_window(rng, 2, 1, 4);
  MpcParams p = unconstrained(2, 1, 4, 5);
  EXPECT_THROW(mpc_step(w, VecX::Zero(2), VecX::Zero(1), p), ValidationError);
  p = unconstrained(2, 1, 4, 4);
  p.R(0, 0) = 0.0;
  EXPECT_THROW(mpc_step(w, VecX::Zero(2), VecX::Zero(1), p), ValidationError);
  p = unconstrained(2, 1, 4, 4);
  p.Q = MatX::Identity(3, 3);
  EXPECT_THROW(mpc_step(w, VecX::Zero(2), VecX::Zero(1), p), ValidationError);
}

TEST(Pid, ZeroErrorGivesZeroTorque) {
  const VecX z = VecX::Zero(2);
  const PidOutput o = pid_step(z, z, z, z, PidState{}, PidGains{}, 0.01);
  EXPECT_EQ(o.tau.norm(), 0.0);
  EXPECT_EQ(o.state.integral.norm(), 0.0);
}

TEST(Pid, ConstantErrorIntegralIncrement) {
  const PidGains g{0.0, 100.0, 0.0};
  const VecX ref = Eigen::Vector2d(0.01, -0.02), z = VecX::Zero(2);
  const PidOutput o1 = pid_step(ref, z, z, z, PidState{}, g, 0.01);
  const PidOutput o2 = pid_step(ref, z, z, z, o1.state, g, 0.01);
  EXPECT_LE((o2.tau - o1.tau - 100.0 * ref * 0.01).norm(), 1e-15);
}

TEST(Pid, OutputSaturatesAndIntegralHolds) {
  const PidGains g{400.0, 100.0, 10.0};
  const VecX ref = Eigen::Vector2d(1.0, -1.0), z = VecX::Zero(2);
  PidState s;
  for (int k = 0; k < 50; ++k) {
    const PidOutput o = pid_step(ref, z, z, z, s, g, 0.01);
    EXPECT_DOUBLE_EQ(o.tau[0], 20.0);
    EXPECT_DOUBLE_EQ(o.tau[1], -20.0);
    s = o.state;
  }
  EXPECT_EQ(s.integral.norm(), 0.0);
}

TEST(Pid, DoubleIntegratorStepConverges) {
  const PidGains g{400.0, 100.0, 10.0};
  const double dt = 0.001;
  VecX th = VecX::Zero(2), dth = VecX::Zero(2);
  const VecX ref = Eigen::Vector2d(0.1, -0.05), z = VecX::Zero(2);
  PidState s;
  double t = 0.0;
  for (; t < 2.0 - 1e-12; t += dt) {
    const PidOutput o = pid_step(ref, z, th, dth, s, g, dt, kInf);
    s = o.state;
    dth += dt * o.tau;
    th += dt * dth;
  }
  EXPECT_LT((ref - th).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(SelectStates, Partition) {
  const VecX x = VecX::LinSpaced(10, 1, 10);
  EXPECT_EQ(select_states(x, StateBlock::kPlatform), VecX::LinSpaced(6, 1, 6));
  EXPECT_EQ(select_states(x, StateBlock::kArm), VecX::LinSpaced(4, 7, 10));
  VecX both(10);
  both << select_states(x, StateBlock::kPlatform), select_states(x, StateBlock::kArm);
  EXPECT_EQ(both, x);
  EXPECT_THROW(select_states(VecX::Zero(6), StateBlock::kArm), ArgumentError);
}

TEST(RestrictLtv, KeepsLeadingBlocks) {
  LtvModel m;
  m.A = MatX::Random(10, 10);
  m.B = MatX::Random(10, 4);
  m.x_ref = VecX::LinSpaced(10, 0, 9);
  m.u_ref = VecX::LinSpaced(4, 0, 3);
  m.f_ref = VecX::LinSpaced(10, 1, 10);
  const LtvModel r = restrict_ltv(m, 6, 2);
  EXPECT_EQ(r.A, MatX(m.A.topLeftCorner(6, 6)));
  EXPECT_EQ(r.B, MatX(m.B.topLeftCorner(6, 2)));
  EXPECT_EQ(r.f_ref, VecX(m.f_ref.head(6)));
}
