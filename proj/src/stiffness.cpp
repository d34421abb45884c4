#include "hcdr/stiffness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hcdr/dynamics.hpp"
#include "hcdr/errors.hpp"
#include "hcdr/redundancy.hpp"

namespace hcdr {

Mat6 stiffness_KT(const CableGeometry& g, const VecX& T) {
  const int n = static_cast<int>(g.length.size());
  if (T.size() != n) throw ArgumentError("tension vector dimension mismatch");
  Mat6 K = Mat6::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec3 u = g.unit.col(i);
    const Mat3 P = Mat3::Identity() - u * u.transpose();
    const Mat3 r = skew(g.moment_arm.col(i));
    const Mat3 Lh = -skew(u);
    const double s = T[i] / g.length[i];
    K.block<3, 3>(0, 0) += s * P;
    K.block<3, 3>(0, 3) += s * P * r.transpose();
    K.block<3, 3>(3, 0) += s * r * P;
    K.block<3, 3>(3, 3) += s * r * P * r.transpose() - T[i] * Lh * r;
  }
  return K;
}

Mat6 stiffness_KT(const RobotModel& model, const Pose& pose, const VecX& T) {
  return stiffness_KT(cable_geometry(model, pose), T);
}

Mat6 stiffness_Kk(const CableGeometry& g, const VecX& kc, const std::vector<int>& cables) {
  Mat6 K = Mat6::Zero();
  for (int i : cables) {
    if (i < 0 || i >= g.length.size()) throw ArgumentError("cable index out of range");
    const Vec3 u = g.unit.col(i);
    Vec6 a;
    a << u, Vec3(g.moment_arm.col(i)).cross(u);
    K += kc[i] * a * a.transpose();
  }
  return K;
}

Mat6 stiffness_Kk(const RobotModel& model, const Pose& pose, const VecX& L0, const std::vector<int>& cables) {
  const CableGeometry g = cable_geometry(model, pose);
  if (L0.size() != model.num_cables()) throw ArgumentError("L0 dimension mismatch");
  VecX kc(model.num_cables());
  for (int i = 0; i < model.num_cables(); ++i) kc[i] = model.platform.cables[i].EA / L0[i];
  return stiffness_Kk(g, kc, cables);
}

std::vector<MatX> structure_matrix_derivative(const RobotModel& model, const Pose& pose, double h) {
  check_euler(pose.euler, model.euler);
  const Mat3 R = rotation(pose.euler, model.euler);
  std::vector<MatX> d;
  for (int k = 0; k < 6; ++k) {
    Vec3 dp = Vec3::Zero(), dth = Vec3::Zero();
    if (k < 3) dp[k] = h;
    else dth[k - 3] = h;
    const MatX Ap = structure_matrix(cable_geometry(model, pose.p + dp, so3_exp(dth) * R));
    const MatX Am = structure_matrix(cable_geometry(model, pose.p - dp, so3_exp(-dth) * R));
    d.push_back((Ap - Am) / (2.0 * h));
  }
  return d;
}

Mat6 stiffness_KT_numeric(const RobotModel& model, const Pose& pose, const VecX& T, double h) {
  const std::vector<MatX> d = structure_matrix_derivative(model, pose, h);
  Mat6 K;
  for (int k = 0; k < 6; ++k) K.col(k) = d[k] * T;
  return K;
}

double objective_JK(const Mat6& K, const Mat6& H) {
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + H.cwiseAbs().maxCoeff()))
    throw ArgumentError("stiffness weighting matrix must be symmetric");
  const Mat6 Ks = 0.5 * (K + K.transpose());
  const Vec6 e = Eigen::SelfAdjointEigenSolver<Mat6>(Ks, Eigen::EigenvaluesOnly).eigenvalues();
  return e.dot(H * e);
}

StiffnessResult evaluate_stiffness(const Mat6& KT, const Mat6& Kk, const Mat6& H) {
  StiffnessResult r;
  r.KT = KT;
  r.Kk = Kk;
  r.K = KT + Kk;
  r.asymmetry = (r.K - r.K.transpose()).cwiseAbs().maxCoeff();
  const Mat6 Ks = 0.5 * (r.K + r.K.transpose());
  r.eigs = Eigen::SelfAdjointEigenSolver<Mat6>(Ks, Eigen::EigenvaluesOnly).eigenvalues();
  r.JK = objective_JK(r.K, H);
  r.is_stable = r.eigs.minCoeff() > 0.0;
  return r;
}

VecX stretch_consistent_kc(const RobotModel& model, const VecX& L, const VecX& T) {
  VecX kc(L.size());
  for (int i = 0; i < L.size(); ++i) kc[i] = (model.platform.cables[i].EA + T[i]) / L[i];
  return kc;
}

StiffnessResult stiffness_of_lambda(const RobotModel& model, const Pose& pose, const VecX& tau_m,
                                    const VecX& lambda, const std::vector<int>& cables, const Mat6& H) {
  const TensionFamily fam = nullspace_family(model, pose, tau_m, cables);
  return evaluate_family(fam, lambda, H);
}

VecX unstretched_lengths_for(const RobotModel& model, const VecX& L, const VecX& T) {
  if (T.size() != model.num_cables() || L.size() != model.num_cables())
    throw ArgumentError("tension vector dimension mismatch");
  VecX L0(T.size());
  for (int i = 0; i < T.size(); ++i) {
    const double EA = model.platform.cables[i].EA;
    if (!(T[i] > -EA))
      throw ValidationError("nonphysical tension on cable " + std::to_string(i + 1) + ": T <= -EA");
    L0[i] = EA * L[i] / (EA + T[i]);
  }
  return L0;
}

VecX unstretched_lengths_for(const RobotModel& model, const Pose& pose, const VecX& T) {
  return unstretched_lengths_for(model, cable_geometry(model, pose).length, T);
}

// ---------------------------------------------------------------------------
// Affine families and the optimizer.

StiffnessResult evaluate_family(const TensionFamily& f, const VecX& lambda, const Mat6& H) {
  if (lambda.size() != f.N.cols()) throw ArgumentError("lambda dimension mismatch");
  const VecX T = f.T0 + f.N * lambda;
  const VecX kc = f.kc0 + f.kcN * lambda;
  StiffnessResult r = evaluate_stiffness(stiffness_KT(f.geom, T), stiffness_Kk(f.geom, kc, f.elastic), H);
  r.lambda = lambda;
  r.T = T;
  return r;
}

namespace {

struct AffineK {
  Mat6 K0;
  std::vector<Mat6> Kj;
  Mat6 at(const VecX& l) const {
    Mat6 K = K0;
    for (size_t j = 0; j < Kj.size(); ++j) K += l[j] * Kj[j];
    return K;
  }
};

bool lex_less(const VecX& a, const VecX& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

double feas_tol(const TensionFamily& f, int i) { return 1e-9 * (1.0 + std::abs(f.Tmax[i])); }

bool feasible(const TensionFamily& f, const VecX& l) {
  const VecX T = f.T0 + f.N * l;
  for (int i = 0; i < T.size(); ++i)
    if (T[i] < f.Tmin[i] - feas_tol(f, i) || T[i] > f.Tmax[i] + feas_tol(f, i)) return false;
  return true;
}

// Lexicographically enumerates d-subsets of {0..n-1}.
bool next_combination(std::vector<int>& c, int n) {
  const int d = static_cast<int>(c.size());
  int i = d - 1;
  while (i >= 0 && c[i] == n - d + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < d; ++j) c[j] = c[j - 1] + 1;
  return true;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<VecX> polytope_vertices(const TensionFamily& f) {
  const int d = static_cast<int>(f.N.cols());
  // Half-spaces a^T l <= b from both bounds of every cable that depends on l.
  std::vector<VecX> rows;
  std::vector<double> rhs;
  for (int i = 0; i < f.N.rows(); ++i) {
    const VecX a = f.N.row(i).transpose();
    if (a.norm() < 1e-12) continue;
    rows.push_back(a);
    rhs.push_back(f.Tmax[i] - f.T0[i]);
    rows.push_back(-a);
    rhs.push_back(f.T0[i] - f.Tmin[i]);
  }
  const int nb = static_cast<int>(rows.size());
  std::vector<VecX> verts;
  if (nb < d || binomial(nb, d) > 4e6) return verts;
  std::vector<int> c(d);
  for (int j = 0; j < d; ++j) c[j] = j;
  MatX A(d, d);
  VecX b(d);
  do {
    for (int j = 0; j < d; ++j) {
      A.row(j) = rows[c[j]].transpose();
      b[j] = rhs[c[j]];
    }
    Eigen::FullPivLU<MatX> lu(A);
    if (lu.rank() < d) continue;
    const VecX l = lu.solve(b);
    if (l.allFinite() && feasible(f, l)) verts.push_back(l);
  } while (next_combination(c, nb));
  return verts;
}

}  // namespace

StiffnessResult optimize_family(const TensionFamily& f, const OptimizerOptions& opt) {
  const int d = static_cast<int>(f.N.cols());
  for (int i = 0; i < f.N.rows(); ++i) {
    if (f.N.row(i).norm() < 1e-12 &&
        (f.T0[i] < f.Tmin[i] - feas_tol(f, i) || f.T0[i] > f.Tmax[i] + feas_tol(f, i))) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "cable %d tension %.6g N is fixed outside [%.6g, %.6g] N", i + 1, f.T0[i],
                    f.Tmin[i], f.Tmax[i]);
      throw InfeasibleError(buf);
    }
  }
  if (d == 0) {
    StiffnessResult r = evaluate_family(f, VecX(), opt.H);
    return r;
  }

  AffineK ak;
  {
    const VecX zero = VecX::Zero(d);
    const StiffnessResult r0 = evaluate_family(f, zero, opt.H);
    ak.K0 = r0.K;
    for (int j = 0; j < d; ++j) {
      VecX e = VecX::Zero(d);
      e[j] = 1.0;
      ak.Kj.push_back(evaluate_family(f, e, opt.H).K - ak.K0);
    }
  }
  auto JK = [&](const VecX& l) { return objective_JK(ak.at(l), opt.H); };

  const std::vector<VecX> verts = polytope_vertices(f);
  if (verts.empty()) throw InfeasibleError("no tension distribution satisfies the cable tension bounds");

  VecX lo = verts[0], hi = verts[0];
  for (const VecX& v : verts) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }

  VecX best;
  double bestJ = -std::numeric_limits<double>::infinity();
  auto consider = [&](const VecX& l) {
    const double J = JK(l);
    if (best.size() == 0) {
      bestJ = J;
      best = l;
      return;
    }
    const double tol = 1e-12 * (1.0 + std::abs(bestJ));
    if (J > bestJ + tol || (std::abs(J - bestJ) <= tol && lex_less(l, best))) {
      bestJ = J;
      best = l;
    }
  };
  for (const VecX& v : verts) consider(v);

  const int res = opt.grid_resolution > 0 ? opt.grid_resolution : (d <= 2 ? 76 : 7);
  if (res >= 2 && std::pow(static_cast<double>(res), d) <= 2e6) {
    std::vector<int> idx(d, 0);
    VecX l(d);
    while (true) {
      for (int j = 0; j < d; ++j) l[j] = lo[j] + (hi[j] - lo[j]) * idx[j] / (res - 1);
      if (feasible(f, l)) consider(l);
      int j = d - 1;
      while (j >= 0 && ++idx[j] == res) idx[j--] = 0;
      if (j < 0) break;
    }
  }

  if (opt.polish) {
    // Nelder-Mead on -J_K; infeasible points are rejected.
    auto cost = [&](const VecX& l) {
      return feasible(f, l) ? -JK(l) : std::numeric_limits<double>::infinity();
    };
    std::vector<VecX> simplex{best};
    std::vector<double> fv{cost(best)};
    for (int j = 0; j < d; ++j) {
      VecX p = best;
      const double step = 0.05 * std::max(hi[j] - lo[j], 1e-6);
      p[j] += (p[j] + step <= hi[j]) ? step : -step;
      simplex.push_back(p);
      fv.push_back(cost(p));
    }
    for (int it = 0; it < opt.polish_iterations; ++it) {
      std::vector<int> ord(d + 1);
      for (int j = 0; j <= d; ++j) ord[j] = j;
      std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
      std::vector<VecX> s2;
      std::vector<double> f2;
      for (int j : ord) {
        s2.push_back(simplex[j]);
        f2.push_back(fv[j]);
      }
      simplex = s2;
      fv = f2;
      if (std::isfinite(fv[d]) && std::abs(fv[d] - fv[0]) <= opt.polish_tolerance * (1.0 + std::abs(fv[0])))
        break;
      VecX centroid = VecX::Zero(d);
      for (int j = 0; j < d; ++j) centroid += simplex[j];
      centroid /= d;
      const VecX xr = centroid + (centroid - simplex[d]);
      const double fr = cost(xr);
      if (fr < fv[0]) {
        const VecX xe = centroid + 2.0 * (centroid - simplex[d]);
        const double fe = cost(xe);
        if (fe < fr) { simplex[d] = xe; fv[d] = fe; }
        else { simplex[d] = xr; fv[d] = fr; }
      } else if (fr < fv[d - 1]) {
        simplex[d] = xr;
        fv[d] = fr;
      } else {
        const VecX xc = centroid + 0.5 * (simplex[d] - centroid);
        const double fc = cost(xc);
        if (fc < fv[d]) {
          simplex[d] = xc;
          fv[d] = fc;
        } else {
          for (int j = 1; j <= d; ++j) {
            simplex[j] = simplex[0] + 0.5 * (simplex[j] - simplex[0]);
            fv[j] = cost(simplex[j]);
          }
        }
      }
    }
    for (int j = 0; j <= d; ++j)
      if (std::isfinite(fv[j]) && -fv[j] > bestJ * (1.0 + 1e-12) + 1e-12) {
        bestJ = -fv[j];
        best = simplex[j];
      }
  }

  StiffnessResult r = evaluate_family(f, best, opt.H);
  for (int i = 0; i < r.T.size(); ++i) r.T[i] = std::clamp(r.T[i], f.Tmin[i], f.Tmax[i]);
  return r;
}

namespace {

void fill_bounds(const RobotModel& model, TensionFamily& f) {
  const int n = model.num_cables();
  f.Tmin.resize(n);
  f.Tmax.resize(n);
  for (int i = 0; i < n; ++i) {
    f.Tmin[i] = model.platform.cables[i].Tmin;
    f.Tmax[i] = model.platform.cables[i].Tmax;
  }
}

const std::vector<int>& group(const RobotModel& model, int id) {
  auto it = model.platform.actuator_groups.find(id);
  if (it == model.platform.actuator_groups.end())
    throw ArgumentError("model has no actuator group " + std::to_string(id));
  return it->second;
}

}  // namespace

TensionFamily nullspace_family(const RobotModel& model, const Pose& pose, const VecX& tau_m,
                               const std::vector<int>& elastic) {
  TensionFamily f;
  f.geom = cable_geometry(model, pose);
  const MatX A = structure_matrix(f.geom);
  const TensionDistribution dist = tension_distribution(A, tau_m);
  f.T0 = dist.particular;
  f.N = dist.null_basis;
  f.elastic = elastic;
  const int n = model.num_cables();
  f.kc0 = stretch_consistent_kc(model, f.geom.length, f.T0);
  f.kcN = MatX(n, f.N.cols());
  for (int i = 0; i < n; ++i) f.kcN.row(i) = f.N.row(i) / f.geom.length[i];
  fill_bounds(model, f);
  return f;
}

StiffnessResult optimize_tensions(const RobotModel& model, const VecX& q, const VecX& qdot, const VecX& qddot,
                                  const OptimizerOptions& opt) {
  const VecX tau = inverse_dynamics(model, q, qdot, qddot);
  const Pose pose = pose_of(q);
  const VecX tau_m = structure_wrench_demand(model, pose.euler, tau.head<6>());
  std::vector<int> all(model.num_cables());
  for (int i = 0; i < model.num_cables(); ++i) all[i] = i;
  return optimize_family(nullspace_family(model, pose, tau_m, all), opt);
}

TensionFamily fixed_length_family(const RobotModel& model, const Pose& pose, double L01, double L02,
                                  const ActuatorSplit& split) {
  TensionFamily f;
  f.geom = cable_geometry(model, pose);
  const int n = model.num_cables();
  f.T0 = VecX::Zero(n);
  f.N = MatX::Zero(n, 2);
  f.kc0 = VecX::Zero(n);
  f.kcN = MatX::Zero(n, 2);
  auto set_length = [&](int gid, double L0) {
    for (int i : group(model, gid)) {
      const double EA = model.platform.cables[i].EA;
      f.T0[i] = EA / L0 * (f.geom.length[i] - L0);
      f.kc0[i] = EA / L0;
      f.elastic.push_back(i);
    }
  };
  set_length(split.length_group_1, L01);
  set_length(split.length_group_2, L02);
  for (int i : group(model, split.tension_group_1)) f.N(i, 0) = 1.0;
  for (int i : group(model, split.tension_group_2)) f.N(i, 1) = 1.0;
  std::sort(f.elastic.begin(), f.elastic.end());
  fill_bounds(model, f);
  return f;
}

PlanarTensionPlan plan_planar_tensions(const RobotModel& model, const Pose& pose, const VecX& tau_m,
                                    const OptimizerOptions& opt, const ActuatorSplit& split) {
  if (tau_m.size() != 6) throw ArgumentError("tau_m must have 6 entries");
  const int n = model.num_cables();
  TensionFamily f;
  f.geom = cable_geometry(model, pose);
  const MatX A = structure_matrix(f.geom);

  // T = c + D v with v = (1/L01, 1/L02, T3, T4).
  VecX c = VecX::Zero(n);
  MatX D = MatX::Zero(n, 4);
  VecX kc_c = VecX::Zero(n);
  MatX kc_D = MatX::Zero(n, 4);
  const int groups[4] = {split.length_group_1, split.length_group_2, split.tension_group_1,
                         split.tension_group_2};
  for (int g = 0; g < 4; ++g) {
    for (int i : group(model, groups[g])) {
      const double EA = model.platform.cables[i].EA;
      if (g < 2) {
        c[i] = -EA;
        D(i, g) = EA * f.geom.length[i];
        kc_D(i, g) = EA;
        f.elastic.push_back(i);
      } else {
        D(i, g) = 1.0;
      }
    }
  }
  std::sort(f.elastic.begin(), f.elastic.end());

  const int rows[3] = {0, 2, 4};
  const MatX AD = A * D;
  const VecX Ac = A * c;
  MatX Ag(3, 4);
  VecX b(3);
  for (int k = 0; k < 3; ++k) {
    Ag.row(k) = AD.row(rows[k]);
    b[k] = tau_m[rows[k]] - Ac[rows[k]];
  }
  const VecX vp = pinv_tensions(Ag, b);
  const MatX nv = null_space(Ag);
  if (nv.cols() != 1) throw RankDeficiencyError(static_cast<int>(4 - nv.cols()), 3);

  f.T0 = c + D * vp;
  f.N = D * nv;
  f.kc0 = kc_c + kc_D * vp;
  f.kcN = kc_D * nv;
  fill_bounds(model, f);

  PlanarTensionPlan plan;
  plan.stiffness = optimize_family(f, opt);
  const VecX v = vp + nv * plan.stiffness.lambda;
  plan.L01 = 1.0 / v[0];
  plan.L02 = 1.0 / v[1];
  plan.T3 = v[2];
  plan.T4 = v[3];
  plan.L0 = unstretched_lengths_for(model, f.geom.length, f.T0 + f.N * plan.stiffness.lambda);
  for (int i : group(model, split.length_group_1)) plan.L0[i] = plan.L01;
  for (int i : group(model, split.length_group_2)) plan.L0[i] = plan.L02;
  return plan;
}

std::vector<StiffnessMapPoint> stiffness_map(const RobotModel& model, const Pose& pose, double L01, double L02,
                                             int resolution, const Mat6& H, const ActuatorSplit& split) {
  if (resolution < 2) throw ArgumentError("grid resolution must be at least 2");
  const TensionFamily f = fixed_length_family(model, pose, L01, L02, split);
  const int i3 = group(model, split.tension_group_1).front();
  const int i4 = group(model, split.tension_group_2).front();
  std::vector<StiffnessMapPoint> out;
  for (int a = 0; a < resolution; ++a) {
    const double T3 = f.Tmin[i3] + (f.Tmax[i3] - f.Tmin[i3]) * a / (resolution - 1);
    for (int b = 0; b < resolution; ++b) {
      const double T4 = f.Tmin[i4] + (f.Tmax[i4] - f.Tmin[i4]) * b / (resolution - 1);
      const StiffnessResult r = evaluate_family(f, Eigen::Vector2d(T3, T4), H);
      out.push_back({T3, T4, r.JK, r.eigs.minCoeff()});
    }
  }
  return out;
}

}  // namespace hcdr
