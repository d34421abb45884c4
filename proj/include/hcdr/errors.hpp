#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hcdr {

/// Machine-readable error category. The CLI maps each category to an exit
/// code and prints the category name next to the message.
enum class ErrorCategory {
  kParse,
  kValidation,
  kArgument,
  kDegenerateGeometry,
  kSingularity,
  kConditioning,
  kRankDeficiency,
  kInfeasible,
  kIterationLimit,
  kLinearization,
  kDivergence,
  kReduction,
  kAlignment,
  kComparison,
  kIo,
};

std::string_view category_name(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& field, int line, const std::string& what);
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorCategory::kValidation, message) {}
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& message)
      : Error(ErrorCategory::kArgument, message) {}
};

class DegenerateGeometryError : public Error {
 public:
  DegenerateGeometryError(int cable_index, double length);
  int cable_index() const { return cable_index_; }

 private:
  int cable_index_;
};

class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& message)
      : Error(ErrorCategory::kSingularity, message) {}
};

class ConditioningError : public Error {
 public:
  explicit ConditioningError(double condition_number);
  double condition_number() const { return condition_number_; }

 private:
  double condition_number_;
};

class RankDeficiencyError : public Error {
 public:
  RankDeficiencyError(int rank, int required);
  int rank() const { return rank_; }

 private:
  int rank_;
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& message)
      : Error(ErrorCategory::kInfeasible, message) {}
};

class IterationLimitError : public Error {
 public:
  explicit IterationLimitError(int iterations);
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& message)
      : Error(ErrorCategory::kDivergence, message) {}
};

}  // namespace hcdr
