#include "hcdr/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hcdr/errors.hpp"

namespace hcdr {

namespace {

double max_violation(const MatX& A, const VecX& b, const VecX& z, int* row) {
  double worst = -std::numeric_limits<double>::infinity();
  if (row) *row = -1;
  if (A.rows() == 0) return worst;
  const VecX r = A * z - b;
  for (int i = 0; i < r.size(); ++i) {
    if (r[i] > worst) {
      worst = r[i];
      if (row) *row = i;
    }
  }
  return worst;
}

// Core loop; z must be feasible on entry.
QpResult active_set(const QpProblem& p, VecX z, const QpOptions& opt) {
  const int n = static_cast<int>(p.H.rows());
  const int m = static_cast<int>(p.A.rows());
  Eigen::LLT<MatX> llt(p.H);
  if (llt.info() != Eigen::Success) throw ArgumentError("QP Hessian is not positive definite");

  std::vector<int> work;
  std::vector<char> in_work(m, 0);
  const double tol = opt.tolerance;

  // Seed the working set with constraints active at the start point, keeping
  // the rows linearly independent.
  {
    const VecX r = m ? VecX(p.A * z - p.b) : VecX();
    MatX rows(0, n);
    for (int i = 0; i < m; ++i) {
      if (std::abs(r[i]) <= tol * (1.0 + std::abs(p.b[i]))) {
        MatX trial(rows.rows() + 1, n);
        trial << rows, p.A.row(i);
        if (Eigen::FullPivLU<MatX>(trial).rank() == trial.rows()) {
          rows = trial;
          work.push_back(i);
          in_work[i] = 1;
        }
      }
    }
  }

  QpResult res;
  VecX mu;
  for (int it = 0; it < opt.max_iterations; ++it) {
    res.iterations = it + 1;
    const VecX grad = p.H * z + p.g;
    const int w = static_cast<int>(work.size());
    VecX step;
    if (w == 0) {
      step = -llt.solve(grad);
      mu.resize(0);
    } else {
      MatX Aw(w, n);
      for (int k = 0; k < w; ++k) Aw.row(k) = p.A.row(work[k]);
      const MatX Y = llt.solve(Aw.transpose());
      const VecX y = llt.solve(grad);
      const MatX S = Aw * Y;
      mu = S.ldlt().solve(-(Aw * y));
      step = -y - Y * mu;
    }

    if (step.norm() <= tol * (1.0 + z.norm())) {
      // Stationary on the working set; check multiplier signs.
      int drop = -1;
      double most_neg = -tol;
      for (int k = 0; k < w; ++k) {
        if (mu[k] < most_neg) {
          most_neg = mu[k];
          drop = k;
        }
      }
      if (drop < 0) {
        res.z = z;
        res.multipliers = VecX::Zero(m);
        for (int k = 0; k < w; ++k) res.multipliers[work[k]] = std::max(0.0, mu[k]);
        res.objective = 0.5 * z.dot(p.H * z) + p.g.dot(z);
        return res;
      }
      in_work[work[drop]] = 0;
      work.erase(work.begin() + drop);
      continue;
    }

    double alpha = 1.0;
    int block = -1;
    for (int i = 0; i < m; ++i) {
      if (in_work[i]) continue;
      const double ap = p.A.row(i).dot(step);
      if (ap <= 1e-14 * (1.0 + step.norm())) continue;
      const double slack = p.b[i] - p.A.row(i).dot(z);
      const double a = std::max(0.0, slack) / ap;
      if (a < alpha) {
        alpha = a;
        block = i;
      }
    }
    z += alpha * step;
    if (block >= 0) {
      work.push_back(block);
      in_work[block] = 1;
    }
  }
  throw IterationLimitError(opt.max_iterations);
}

}  // namespace

QpResult solve_qp(const QpProblem& p, const QpOptions& opt, const VecX& warm_start) {
  const int n = static_cast<int>(p.H.rows());
  if (p.H.cols() != n || p.g.size() != n || (p.A.rows() > 0 && p.A.cols() != n) || p.b.size() != p.A.rows())
    throw ArgumentError("QP dimension mismatch");

  VecX z0 = VecX::Zero(n);
  if (warm_start.size() == n && max_violation(p.A, p.b, warm_start, nullptr) <= opt.tolerance) z0 = warm_start;
  int row = -1;
  const double viol = max_violation(p.A, p.b, z0, &row);
  if (viol <= opt.tolerance) return active_set(p, z0, opt);

  // Phase 1: min 0.5 eps |z|^2 + 0.5 eps t^2 + t  s.t.  A z - t <= b, -t <= 0.
  const int m = static_cast<int>(p.A.rows());
  QpProblem ph;
  const double eps = 1e-8;
  ph.H = MatX::Identity(n + 1, n + 1) * eps;
  ph.g = VecX::Zero(n + 1);
  ph.g[n] = 1.0;
  ph.A = MatX::Zero(m + 1, n + 1);
  ph.A.topLeftCorner(m, n) = p.A;
  ph.A.block(0, n, m, 1).setConstant(-1.0);
  ph.A(m, n) = -1.0;
  ph.b = VecX::Zero(m + 1);
  ph.b.head(m) = p.b;
  VecX start = VecX::Zero(n + 1);
  start[n] = viol + 1.0;
  QpOptions o1 = opt;
  o1.max_iterations = std::max(opt.max_iterations, 4 * (m + n));
  const QpResult r1 = active_set(ph, start, o1);
  VecX zf = r1.z.head(n);
  // The regularized phase-1 optimum sits within roughly eps of the boundary;
  // snap onto the nearly active rows so the main loop starts feasible.
  {
    const VecX r = p.A * zf - p.b;
    MatX rows(0, n);
    VecX rhs(0);
    for (int i = 0; i < m; ++i) {
      if (r[i] < -std::sqrt(opt.tolerance) * (1.0 + std::abs(p.b[i]))) continue;
      MatX trial(rows.rows() + 1, n);
      trial << rows, p.A.row(i);
      if (Eigen::FullPivLU<MatX>(trial).rank() < trial.rows()) continue;
      rows = trial;
      VecX rt(rhs.size() + 1);
      rt << rhs, r[i];
      rhs = rt;
    }
    if (rows.rows() > 0) zf -= rows.completeOrthogonalDecomposition().solve(rhs);
  }
  const double v1 = max_violation(p.A, p.b, zf, &row);
  if (v1 > std::sqrt(opt.tolerance)) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "QP infeasible: constraint row %d violated by %.6g", row, v1);
    throw InfeasibleError(buf);
  }
  return active_set(p, zf, opt);
}

}  // namespace hcdr
