#pragma once

#include <vector>

#include "hcdr/sim.hpp"

namespace hcdr {

struct EvalReport {
  double rmse_x = 0.0;
  double rmse_z = 0.0;
  double rmse_2d = 0.0;
  int samples = 0;
  double min_tension = 0.0;
  double max_tension = 0.0;
};

/// End-effector RMSE over matched samples. Throws Error(kAlignment) on a
/// length mismatch or an empty path.
EvalReport rmse(const std::vector<Eigen::Vector2d>& path, const std::vector<Eigen::Vector2d>& reference);

/// RMSE of the recorded end-effector path plus the tension range of the run.
EvalReport evaluate_trace(const SimTrace& trace);

}  // namespace hcdr
