#include "hcdr/control.hpp"

#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include "hcdr/errors.hpp"

namespace hcdr {

LtvModel linearize(const PlantFn& plant, const VecX& x_ref, const VecX& u_ref) {
  const int ns = static_cast<int>(x_ref.size());
  const int nu = static_cast<int>(u_ref.size());
  LtvModel m;
  m.x_ref = x_ref;
  m.u_ref = u_ref;
  m.f_ref = plant(x_ref, u_ref);
  if (!m.f_ref.allFinite()) throw Error(ErrorCategory::kLinearization, "plant output is not finite at the reference");
  m.A.resize(m.f_ref.size(), ns);
  m.B.resize(m.f_ref.size(), nu);
  for (int i = 0; i < ns; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x_ref[i]));
    VecX xp = x_ref, xm = x_ref;
    xp[i] += h;
    xm[i] -= h;
    m.A.col(i) = (plant(xp, u_ref) - plant(xm, u_ref)) / (2.0 * h);
  }
  for (int i = 0; i < nu; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(u_ref[i]));
    VecX up = u_ref, um = u_ref;
    up[i] += h;
    um[i] -= h;
    m.B.col(i) = (plant(x_ref, up) - plant(x_ref, um)) / (2.0 * h);
  }
  if (!m.A.allFinite() || !m.B.allFinite())
    throw Error(ErrorCategory::kLinearization, "plant Jacobian is not finite");
  m.C = MatX::Identity(ns, ns);
  return m;
}

DiscreteLtv discretize(const MatX& A, const MatX& B, double Ts) {
  if (!(Ts > 0.0)) throw ArgumentError("sampling time must be positive");
  const int ns = static_cast<int>(A.rows());
  const int nu = static_cast<int>(B.cols());
  const int n = 2 * ns + nu;
  MatX M = MatX::Zero(n, n);
  M.topLeftCorner(ns, ns) = A * Ts;
  M.block(0, ns, ns, nu) = B * Ts;
  M.block(0, ns + nu, ns, ns) = MatX::Identity(ns, ns) * Ts;
  const MatX E = M.exp();
  DiscreteLtv d;
  d.Ad = E.topLeftCorner(ns, ns);
  d.Bd = E.block(0, ns, ns, nu);
  d.Ed = E.block(0, ns + nu, ns, ns);
  return d;
}

LtvModel restrict_ltv(const LtvModel& m, int ns, int nu) {
  LtvModel r;
  r.A = m.A.topLeftCorner(ns, ns);
  r.B = m.B.topLeftCorner(ns, nu);
  r.C = MatX::Identity(ns, ns);
  r.x_ref = m.x_ref.head(ns);
  r.u_ref = m.u_ref.head(nu);
  r.f_ref = m.f_ref.head(ns);
  return r;
}

namespace {

bool is_symmetric(const MatX& M) {
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + M.cwiseAbs().maxCoeff());
}

double min_eig(const MatX& M) { return Eigen::SelfAdjointEigenSolver<MatX>(M).eigenvalues().minCoeff(); }

VecX or_inf(const VecX& v, int n, double sign) {
  if (v.size() == n) return v;
  if (v.size() != 0) throw ArgumentError("MPC bound vector has the wrong dimension");
  return VecX::Constant(n, sign * std::numeric_limits<double>::infinity());
}

}  // namespace

void MpcParams::validate(int ns, int nu) const {
  if (!(Ts > 0.0)) throw ValidationError("MPC sampling time must be positive");
  if (Np < 1 || Nc < 1 || Nc > Np) throw ValidationError("MPC horizons must satisfy 1 <= Nc <= Np");
  if (Q.rows() != ns || Q.cols() != ns || P.rows() != ns || P.cols() != ns)
    throw ValidationError("Q and P must be " + std::to_string(ns) + "x" + std::to_string(ns));
  if (R.rows() != nu || R.cols() != nu)
    throw ValidationError("R must be " + std::to_string(nu) + "x" + std::to_string(nu));
  if (!is_symmetric(Q) || !is_symmetric(P) || !is_symmetric(R))
    throw ValidationError("MPC weights must be symmetric");
  if (min_eig(R) <= 0.0) throw ValidationError("R must be positive definite");
  if (min_eig(Q) < -1e-12 || min_eig(P) < -1e-12) throw ValidationError("Q and P must be positive semidefinite");
  auto check_pair = [](const VecX& lo, const VecX& hi, int n, const char* what) {
    const VecX l = or_inf(lo, n, -1.0), h = or_inf(hi, n, 1.0);
    for (int i = 0; i < n; ++i)
      if (!(l[i] <= h[i])) throw ValidationError(std::string(what) + " lower bound exceeds upper bound");
  };
  check_pair(dx_lo, dx_hi, ns, "state increment");
  check_pair(du_lo, du_hi, nu, "input increment");
  check_pair(u_lo, u_hi, nu, "input");
}

CondensedMpc build_mpc_qp(const MpcWindow& w, const VecX& x_now, const VecX& u_prev, const MpcParams& p) {
  const int Np = p.Np, Nc = p.Nc;
  if (static_cast<int>(w.stages.size()) < Np) throw ArgumentError("MPC window shorter than the horizon");
  const int ns = static_cast<int>(x_now.size());
  const int nu = static_cast<int>(u_prev.size());
  p.validate(ns, nu);
  const int nz = nu * Nc;

  // Input deviation with zero increments: ut0(j) = u_prev - u_ref(j).
  std::vector<VecX> ut0(Np);
  for (int j = 0; j < Np; ++j) ut0[j] = u_prev - w.stages[j].u_ref;

  MatX H = MatX::Zero(nz, nz);
  VecX g = VecX::Zero(nz);
  double constant = 0.0;

  // Input cost: sum_j S_j^T R S_j has blocks R * (Np - max(l, m)).
  for (int l = 0; l < Nc; ++l)
    for (int m = 0; m < Nc; ++m) {
      H.block(l * nu, m * nu, nu, nu) += p.R * static_cast<double>(Np - std::max(l, m));
    }
  {
    std::vector<VecX> suffix(Np + 1, VecX::Zero(nu));
    for (int j = Np - 1; j >= 0; --j) suffix[j] = suffix[j + 1] + ut0[j];
    for (int l = 0; l < Nc; ++l) g.segment(l * nu, nu) += p.R * suffix[l];
    for (int j = 0; j < Np; ++j) constant += ut0[j].dot(p.R * ut0[j]);
  }

  // State recursion e(j+1) = Ad e(j) + Bd (ut0(j) + S_j z) + d.
  const VecX dxl = or_inf(p.dx_lo, ns, -1.0), dxh = or_inf(p.dx_hi, ns, 1.0);
  const VecX dul = or_inf(p.du_lo, nu, -1.0), duh = or_inf(p.du_hi, nu, 1.0);
  const VecX ul = or_inf(p.u_lo, nu, -1.0), uh = or_inf(p.u_hi, nu, 1.0);

  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  auto add_row = [&](const Eigen::RowVectorXd& a, double b) {
    rows.push_back(a);
    rhs.push_back(b);
  };

  MatX Gam = MatX::Zero(ns, nz);
  VecX c = x_now - w.stages[0].x_ref;
  constant += c.dot(p.Q * c);
  for (int j = 0; j < Np; ++j) {
    const MpcStage& st = w.stages[j];
    MatX Gn = st.Ad * Gam;
    const int last = std::min(j, Nc - 1);
    for (int l = 0; l <= last; ++l) Gn.middleCols(l * nu, nu) += st.Bd;
    const VecX cn = st.Ad * c + st.Bd * ut0[j] + st.d;
    const MatX& W = (j + 1 == Np) ? p.P : p.Q;
    const MatX WG = W * Gn;
    H.noalias() += Gn.transpose() * WG;
    g.noalias() += WG.transpose() * cn;
    constant += cn.dot(W * cn);

    // State increment bounds: x(j+1) - x(j).
    const VecX xr_next = (j + 1 < Np) ? w.stages[j + 1].x_ref : w.x_ref_end;
    const VecX dref = xr_next - st.x_ref;
    for (int i = 0; i < ns; ++i) {
      if (!std::isfinite(dxh[i]) && !std::isfinite(dxl[i])) continue;
      const Eigen::RowVectorXd a = Gn.row(i) - Gam.row(i);
      const double off = dref[i] + cn[i] - c[i];
      if (std::isfinite(dxh[i])) add_row(a, dxh[i] - off);
      if (std::isfinite(dxl[i])) add_row(-a, off - dxl[i]);
    }
    Gam = std::move(Gn);
    c = cn;
  }

  for (int l = 0; l < Nc; ++l)
    for (int k = 0; k < nu; ++k) {
      Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(nz);
      e[l * nu + k] = 1.0;
      if (std::isfinite(duh[k])) add_row(e, duh[k]);
      if (std::isfinite(dul[k])) add_row(-e, -dul[k]);
    }
  for (int j = 0; j < Nc; ++j)
    for (int k = 0; k < nu; ++k) {
      if (!std::isfinite(uh[k]) && !std::isfinite(ul[k])) continue;
      Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(nz);
      for (int l = 0; l <= j; ++l) e[l * nu + k] = 1.0;
      if (std::isfinite(uh[k])) add_row(e, uh[k] - u_prev[k]);
      if (std::isfinite(ul[k])) add_row(-e, u_prev[k] - ul[k]);
    }

  CondensedMpc out;
  out.qp.H = 2.0 * H;
  out.qp.H = 0.5 * (out.qp.H + out.qp.H.transpose());
  out.qp.g = 2.0 * g;
  out.qp.A.resize(static_cast<int>(rows.size()), nz);
  out.qp.b.resize(static_cast<int>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    out.qp.A.row(static_cast<int>(i)) = rows[i];
    out.qp.b[static_cast<int>(i)] = rhs[i];
  }
  out.constant = constant;
  return out;
}

MpcSolution mpc_step(const MpcWindow& w, const VecX& x_now, const VecX& u_prev, const MpcParams& p,
                     const QpOptions& qp_options) {
  const CondensedMpc c = build_mpc_qp(w, x_now, u_prev, p);
  const QpResult r = solve_qp(c.qp, qp_options);
  MpcSolution s;
  s.du = r.z;
  s.u = u_prev + r.z.head(u_prev.size());
  s.cost = r.objective + c.constant;
  s.qp_iterations = r.iterations;
  return s;
}

PidOutput pid_step(const VecX& theta_ref, const VecX& dtheta_ref, const VecX& theta, const VecX& dtheta,
                   const PidState& state, const PidGains& gains, double dt, double limit) {
  if (!(dt > 0.0)) throw ArgumentError("PID time step must be positive");
  const int n = static_cast<int>(theta.size());
  const VecX e = theta_ref - theta;
  const VecX ed = dtheta_ref - dtheta;
  PidOutput out;
  out.state.integral = state.initialized ? state.integral : VecX::Zero(n);
  const VecX prev = state.initialized ? state.last_error : e;
  const VecX candidate = out.state.integral + 0.5 * (e + prev) * dt;
  out.tau.resize(n);
  for (int i = 0; i < n; ++i) {
    const double raw = gains.kp * e[i] + gains.ki * candidate[i] + gains.kd * ed[i];
    const bool saturated = std::abs(raw) > limit;
    const bool winding = saturated && (raw > 0) == (e[i] > 0);
    if (!winding) out.state.integral[i] = candidate[i];
    const double tau = gains.kp * e[i] + gains.ki * out.state.integral[i] + gains.kd * ed[i];
    out.tau[i] = std::clamp(tau, -limit, limit);
  }
  out.state.last_error = e;
  out.state.initialized = true;
  return out;
}

VecX select_states(const VecX& x, StateBlock which) {
  if (x.size() != 10) throw ArgumentError("planar state must have 10 entries");
  return which == StateBlock::kPlatform ? VecX(x.head(6)) : VecX(x.tail(4));
}

}  // namespace hcdr
