#include "hcdr/redundancy.hpp"

#include <limits>

#include "hcdr/dynamics.hpp"
#include "hcdr/errors.hpp"

namespace hcdr {

namespace {

double rank_tol(const MatX& A, const VecX& sv) {
  const double smax = sv.size() ? sv.maxCoeff() : 0.0;
  return smax * static_cast<double>(std::max(A.rows(), A.cols())) * std::numeric_limits<double>::epsilon() * 16.0;
}

int rank_of(const MatX& A, const VecX& sv) {
  const double tol = rank_tol(A, sv);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > tol) ++r;
  return r;
}

}  // namespace

int numerical_rank(const MatX& A) {
  Eigen::JacobiSVD<MatX> svd(A);
  return rank_of(A, svd.singularValues());
}

VecX pinv_tensions(const MatX& A, const VecX& tau) {
  if (tau.size() != A.rows()) throw ArgumentError("wrench dimension mismatch");
  Eigen::JacobiSVD<MatX> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VecX sv = svd.singularValues();
  const int r = rank_of(A, sv);
  if (r < A.rows()) throw RankDeficiencyError(r, static_cast<int>(A.rows()));
  VecX coeff = svd.matrixU().leftCols(r).transpose() * tau;
  for (int i = 0; i < r; ++i) coeff[i] /= sv[i];
  return svd.matrixV().leftCols(r) * coeff;
}

MatX null_space(const MatX& A) {
  const int n = static_cast<int>(A.cols());
  Eigen::JacobiSVD<MatX> svd(A, Eigen::ComputeFullV);
  const int r = rank_of(A, svd.singularValues());
  MatX N = svd.matrixV().rightCols(n - r);
  // Orthonormalize and fix signs so the first nonzero entry is positive.
  for (int c = 0; c < N.cols(); ++c) {
    for (int i = 0; i < n; ++i) {
      if (std::abs(N(i, c)) > 1e-12) {
        if (N(i, c) < 0) N.col(c) = -N.col(c);
        break;
      }
    }
  }
  return N;
}

TensionDistribution tension_distribution(const MatX& A, const VecX& tau) {
  TensionDistribution d;
  d.particular = pinv_tensions(A, tau);
  d.null_basis = null_space(A);
  d.rank = static_cast<int>(A.cols() - d.null_basis.cols());
  return d;
}

VecX distribute(const MatX& A, const VecX& tau, const VecX& lambda) {
  const TensionDistribution d = tension_distribution(A, tau);
  if (lambda.size() != d.null_basis.cols())
    throw ArgumentError("lambda has " + std::to_string(lambda.size()) + " entries, null space has " +
                        std::to_string(d.null_basis.cols()));
  return d.particular + d.null_basis * lambda;
}

VecX structure_wrench_demand(const RobotModel& model, const Vec3& euler, const VecX& tau_platform) {
  if (tau_platform.size() != 6) throw ArgumentError("platform generalized force must have 6 entries");
  return -generalized_to_wrench(model, euler, Vec6(tau_platform));
}

}  // namespace hcdr
