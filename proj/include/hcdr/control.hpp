#pragma once

#include <functional>
#include <vector>

#include "hcdr/linalg.hpp"
#include "hcdr/qp.hpp"

namespace hcdr {

using PlantFn = std::function<VecX(const VecX& x, const VecX& u)>;

struct LtvModel {
  MatX A, B, C;
  VecX x_ref, u_ref;
  VecX f_ref;  // f(x_ref, u_ref)
};

/// Central differences with step 1e-6 * max(1, |coordinate|).
LtvModel linearize(const PlantFn& plant, const VecX& x_ref, const VecX& u_ref);

/// Exact zero-order hold: Ad = e^{A Ts}, [Bd, Ed] = int_0^Ts e^{A s} ds [B, I].
struct DiscreteLtv {
  MatX Ad, Bd, Ed;
};
DiscreteLtv discretize(const MatX& A, const MatX& B, double Ts);

/// Keeps rows/cols [0, ns) of A and rows [0, ns), cols [0, nu) of B.
LtvModel restrict_ltv(const LtvModel& m, int ns, int nu);

struct MpcParams {
  double Ts = 0.01;
  int Np = 50;
  int Nc = 50;
  MatX Q, R, P;
  VecX dx_lo, dx_hi;  // per-step state increment bounds (+-inf = none)
  VecX du_lo, du_hi;  // per-step input increment bounds
  VecX u_lo, u_hi;    // absolute input bounds (+-inf = none)

  void validate(int ns, int nu) const;
};

/// One prediction stage: e(j+1) = Ad e(j) + Bd (u(j) - u_ref(j)) + d with
/// e = x - x_ref.
struct MpcStage {
  MatX Ad, Bd;
  VecX d;
  VecX x_ref, u_ref;
};

struct MpcWindow {
  std::vector<MpcStage> stages;  // Np entries
  VecX x_ref_end;                // x_ref(Np)
};

struct MpcSolution {
  VecX u;      // first move applied: u_prev + du(0)
  VecX du;     // Nc * nu stacked increments
  double cost = 0.0;
  int qp_iterations = 0;
};

struct CondensedMpc {
  QpProblem qp;
  double constant = 0.0;  // cost at du = 0 is constant; full cost = 0.5 z'Hz + g'z + constant
};

CondensedMpc build_mpc_qp(const MpcWindow& window, const VecX& x_now, const VecX& u_prev, const MpcParams& p);
MpcSolution mpc_step(const MpcWindow& window, const VecX& x_now, const VecX& u_prev, const MpcParams& p,
                     const QpOptions& qp_options = {});

struct PidGains {
  double kp = 400.0;
  double ki = 100.0;
  double kd = 10.0;
};

struct PidState {
  VecX integral;
  VecX last_error;
  bool initialized = false;
};

struct PidOutput {
  VecX tau;
  PidState state;
};

/// Trapezoidal integral; on saturation at +-limit the integral update that
/// would push further into saturation is discarded.
PidOutput pid_step(const VecX& theta_ref, const VecX& dtheta_ref, const VecX& theta, const VecX& dtheta,
                   const PidState& state, const PidGains& gains, double dt, double limit = 20.0);

enum class StateBlock { kPlatform, kArm };
VecX select_states(const VecX& x, StateBlock which);

}  // namespace hcdr
