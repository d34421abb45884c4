#pragma once

#include <cmath>
#include <random>

#include "hcdr/linalg.hpp"
#include "hcdr/model.hpp"

namespace hcdr::test {

inline VecX uniform(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  VecX v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

// Platform near the workspace centre with moderate attitude; arbitrary joints.
inline VecX random_q(std::mt19937_64& rng, const RobotModel& m) {
  VecX q = VecX::Zero(m.dof());
  q.head(3) = uniform(rng, 3, -0.2, 0.2);
  q.segment(3, 3) = uniform(rng, 3, -0.5, 0.5);
  if (m.num_joints() > 0) q.tail(m.num_joints()) = uniform(rng, m.num_joints(), -3.0, 3.0);
  return q;
}

inline double rel_err(const VecX& a, const VecX& b) { return (a - b).norm() / (1.0 + b.norm()); }

inline Mat3 explicit_rx(double a) {
  Mat3 r;
  r << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
  return r;
}
inline Mat3 explicit_ry(double a) {
  Mat3 r;
  r << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
  return r;
}
inline Mat3 explicit_rz(double a) {
  Mat3 r;
  r << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return r;
}

}  // namespace hcdr::test
