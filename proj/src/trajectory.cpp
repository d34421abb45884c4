#include "hcdr/trajectory.hpp"

#include "hcdr/errors.hpp"

namespace hcdr {

std::array<double, 6> quintic_coefficients(double T, double p0, double v0, double a0, double p1, double v1,
                                           double a1) {
  const double T2 = T * T, T3 = T2 * T, T4 = T3 * T, T5 = T4 * T;
  const double h = p1 - p0;
  std::array<double, 6> c{};
  c[0] = p0;
  c[1] = v0;
  c[2] = 0.5 * a0;
  c[3] = (20 * h - (8 * v1 + 12 * v0) * T - (3 * a0 - a1) * T2) / (2 * T3);
  c[4] = (-30 * h + (14 * v1 + 16 * v0) * T + (3 * a0 - 2 * a1) * T2) / (2 * T4);
  c[5] = (12 * h - 6 * (v1 + v0) * T + (a1 - a0) * T2) / (2 * T5);
  return c;
}

Trajectory::Trajectory(std::vector<Waypoint> waypoints) : waypoints_(std::move(waypoints)) {
  if (waypoints_.size() < 2) throw ArgumentError("a trajectory needs at least two waypoints");
  const int n = static_cast<int>(waypoints_.front().x.size());
  if (n == 0 || n % 2 != 0) throw ArgumentError("waypoint states must hold (position, velocity) pairs");
  for (size_t k = 0; k < waypoints_.size(); ++k) {
    if (waypoints_[k].x.size() != n) throw ArgumentError("waypoint dimensions differ");
    if (!waypoints_[k].x.allFinite() || !std::isfinite(waypoints_[k].t))
      throw ArgumentError("waypoints must be finite");
    if (k > 0 && !(waypoints_[k].t > waypoints_[k - 1].t))
      throw ArgumentError("waypoint times must be strictly increasing");
  }
  for (size_t k = 0; k + 1 < waypoints_.size(); ++k) {
    const double T = waypoints_[k + 1].t - waypoints_[k].t;
    std::vector<std::array<double, 6>> seg;
    for (int c = 0; c < n / 2; ++c) {
      const VecX& a = waypoints_[k].x;
      const VecX& b = waypoints_[k + 1].x;
      seg.push_back(quintic_coefficients(T, a[2 * c], a[2 * c + 1], 0.0, b[2 * c], b[2 * c + 1], 0.0));
    }
    coeffs_.push_back(std::move(seg));
  }
}

TrajectorySample Trajectory::sample(double t) const {
  const int n = state_dim();
  TrajectorySample s;
  s.x = VecX::Zero(n);
  s.acc = VecX::Zero(n / 2);
  if (t <= t_begin() || t >= t_end()) {
    const VecX& w = (t <= t_begin() ? waypoints_.front() : waypoints_.back()).x;
    for (int c = 0; c < n / 2; ++c) s.x[2 * c] = w[2 * c];
    if (t == t_begin()) s.x = waypoints_.front().x;
    if (t == t_end()) s.x = waypoints_.back().x;
    return s;
  }
  size_t k = 0;
  while (k + 1 < waypoints_.size() && t >= waypoints_[k + 1].t) ++k;
  const double tau = t - waypoints_[k].t;
  for (int c = 0; c < n / 2; ++c) {
    const auto& a = coeffs_[k][c];
    s.x[2 * c] = a[0] + tau * (a[1] + tau * (a[2] + tau * (a[3] + tau * (a[4] + tau * a[5]))));
    s.x[2 * c + 1] = a[1] + tau * (2 * a[2] + tau * (3 * a[3] + tau * (4 * a[4] + tau * 5 * a[5])));
    s.acc[c] = 2 * a[2] + tau * (6 * a[3] + tau * (12 * a[4] + tau * 20 * a[5]));
  }
  return s;
}

Trajectory quintic_trajectory(const std::vector<Waypoint>& waypoints) { return Trajectory(waypoints); }

Trajectory case_study_trajectory() {
  const double tA = 1.0, tB = 3.0, tC = 5.0, tEnd = 6.0;
  const double tD = tEnd;
  auto state = [](double th2, double th3) {
    VecX x = VecX::Zero(10);
    x[0] = 0.05;
    x[2] = 0.1;
    x[6] = th2;
    x[8] = th3;
    return x;
  };
  return Trajectory({{0.0, state(0, 0)},
                     {tA, state(0, 0)},
                     {tB, state(0, 0.3 * (tB - tA))},
                     {tC, state(0.4 * (tC - tB), 0.3 * (tC - tB))},
                     {tEnd, state(1.0 * (tD - tC), 1.0 * (tD - tC))}});
}

}  // namespace hcdr
