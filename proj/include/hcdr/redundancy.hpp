#pragma once

#include "hcdr/linalg.hpp"
#include "hcdr/model.hpp"

namespace hcdr {

struct TensionDistribution {
  VecX particular;  // minimum-norm solution of A T = tau
  MatX null_basis;  // N x (N - rank), orthonormal columns
  int rank = 0;
};

/// Numerical rank with tolerance sigma_max * max(rows, cols) * eps * 16.
int numerical_rank(const MatX& A);

VecX pinv_tensions(const MatX& A, const VecX& tau);
MatX null_space(const MatX& A);
TensionDistribution tension_distribution(const MatX& A, const VecX& tau);
VecX distribute(const MatX& A, const VecX& tau, const VecX& lambda);

/// tau_m for "A_m T = tau_m" from the platform part of a generalized force
/// demand (inverse-dynamics output). Cables pull, so tau_m is the negative of
/// the world wrench the platform needs.
VecX structure_wrench_demand(const RobotModel& model, const Vec3& euler, const VecX& tau_platform);

}  // namespace hcdr
