#pragma once

#include "hcdr/linalg.hpp"

namespace hcdr {

/// min 0.5 z^T H z + g^T z  s.t.  A z <= b,  H symmetric positive definite.
struct QpProblem {
  MatX H;
  VecX g;
  MatX A;
  VecX b;
};

struct QpOptions {
  double tolerance = 1e-9;
  int max_iterations = 500;
};

struct QpResult {
  VecX z;
  VecX multipliers;  // one per inequality row, >= 0
  double objective = 0.0;
  int iterations = 0;
};

/// Primal active-set method. Starts from z = 0 when feasible, otherwise from
/// a phase-1 point. Throws InfeasibleError (naming the most violated row) or
/// IterationLimitError.
QpResult solve_qp(const QpProblem& problem, const QpOptions& options = {}, const VecX& warm_start = VecX());

}  // namespace hcdr
