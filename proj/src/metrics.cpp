#include "hcdr/metrics.hpp"

#include <cmath>
#include <limits>

#include "hcdr/errors.hpp"

namespace hcdr {

EvalReport rmse(const std::vector<Eigen::Vector2d>& path, const std::vector<Eigen::Vector2d>& reference) {
  if (path.size() != reference.size())
    throw Error(ErrorCategory::kAlignment, "path has " + std::to_string(path.size()) + " samples, reference has " +
                                               std::to_string(reference.size()));
  if (path.empty()) throw Error(ErrorCategory::kAlignment, "no samples to compare");
  double sx = 0.0, sz = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const Eigen::Vector2d e = reference[i] - path[i];
    sx += e.x() * e.x();
    sz += e.y() * e.y();
  }
  const double n = static_cast<double>(path.size());
  EvalReport r;
  r.samples = static_cast<int>(path.size());
  r.rmse_x = std::sqrt(sx / n);
  r.rmse_z = std::sqrt(sz / n);
  r.rmse_2d = std::sqrt((sx + sz) / n);
  return r;
}

EvalReport evaluate_trace(const SimTrace& trace) {
  EvalReport r = rmse(trace.pe, trace.pe_ref);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const VecX& T : trace.T) {
    lo = std::min(lo, T.minCoeff());
    hi = std::max(hi, T.maxCoeff());
  }
  r.min_tension = lo;
  r.max_tension = hi;
  return r;
}

}  // namespace hcdr
