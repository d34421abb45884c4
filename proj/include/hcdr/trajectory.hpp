#pragma once

#include <array>
#include <vector>

#include "hcdr/linalg.hpp"

namespace hcdr {

struct Waypoint {
  double t = 0.0;
  VecX x;  // state with interleaved (position, velocity) pairs
};

struct TrajectorySample {
  VecX x;    // positions and velocities
  VecX acc;  // accelerations of the position coordinates
};

/// Piecewise quintic through state waypoints. Each position coordinate k uses
/// x[2k] as the knot value and x[2k+1] as the knot velocity, with zero knot
/// acceleration. Before the first and after the last knot the boundary
/// waypoint is held with zero derivatives.
class Trajectory {
 public:
  explicit Trajectory(std::vector<Waypoint> waypoints);

  TrajectorySample sample(double t) const;
  const std::vector<Waypoint>& waypoints() const { return waypoints_; }
  double t_begin() const { return waypoints_.front().t; }
  double t_end() const { return waypoints_.back().t; }
  int state_dim() const { return static_cast<int>(waypoints_.front().x.size()); }

 private:
  std::vector<Waypoint> waypoints_;
  // coeffs_[segment][coordinate] = c0..c5 in local time tau = t - t_k.
  std::vector<std::vector<std::array<double, 6>>> coeffs_;
};

/// Quintic with matching position, velocity and acceleration at both ends.
std::array<double, 6> quintic_coefficients(double T, double p0, double v0, double a0, double p1, double v1,
                                           double a1);

Trajectory quintic_trajectory(const std::vector<Waypoint>& waypoints);

/// Start -> A -> B -> C -> end path of the case study (times 0, 1, 3, 5, 6 s).
/// The end segment takes the undefined t_D as the end time.
Trajectory case_study_trajectory();

}  // namespace hcdr
