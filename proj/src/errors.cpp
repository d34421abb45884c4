#include "hcdr/errors.hpp"

#include <cstdio>

namespace hcdr {

std::string_view category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kParse: return "parse";
    case ErrorCategory::kValidation: return "validation";
    case ErrorCategory::kArgument: return "argument";
    case ErrorCategory::kDegenerateGeometry: return "degenerate_geometry";
    case ErrorCategory::kSingularity: return "singularity";
    case ErrorCategory::kConditioning: return "conditioning";
    case ErrorCategory::kRankDeficiency: return "rank_deficiency";
    case ErrorCategory::kInfeasible: return "infeasible";
    case ErrorCategory::kIterationLimit: return "iteration_limit";
    case ErrorCategory::kLinearization: return "linearization";
    case ErrorCategory::kDivergence: return "divergence";
    case ErrorCategory::kReduction: return "reduction";
    case ErrorCategory::kAlignment: return "alignment";
    case ErrorCategory::kComparison: return "comparison";
    case ErrorCategory::kIo: return "io";
  }
  return "unknown";
}

namespace {

std::string parse_message(const std::string& field, int line, const std::string& what) {
  std::string msg = "field '" + field + "'";
  if (line > 0) msg += " (line " + std::to_string(line) + ")";
  return msg + ": " + what;
}

}  // namespace

ParseError::ParseError(const std::string& field, int line, const std::string& what)
    : Error(ErrorCategory::kParse, parse_message(field, line, what)), field_(field), line_(line) {}

DegenerateGeometryError::DegenerateGeometryError(int cable_index, double length)
    : Error(ErrorCategory::kDegenerateGeometry,
            "cable " + std::to_string(cable_index + 1) + " has near-zero length " +
                std::to_string(length) + " m"),
      cable_index_(cable_index) {}

ConditioningError::ConditioningError(double condition_number)
    : Error(ErrorCategory::kConditioning,
            [condition_number] {
              char buf[96];
              std::snprintf(buf, sizeof(buf), "mass matrix is near-singular (condition number %.3e)",
                            condition_number);
              return std::string(buf);
            }()),
      condition_number_(condition_number) {}

RankDeficiencyError::RankDeficiencyError(int rank, int required)
    : Error(ErrorCategory::kRankDeficiency,
            "singular configuration: structure matrix rank " + std::to_string(rank) +
                " < required " + std::to_string(required)),
      rank_(rank) {}

IterationLimitError::IterationLimitError(int iterations)
    : Error(ErrorCategory::kIterationLimit,
            "solver did not converge within " + std::to_string(iterations) + " iterations") {}

}  // namespace hcdr
