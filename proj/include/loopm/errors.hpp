#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace loopm {

enum class ErrorKind {
  SyntaxError,
  ProbabilityError,
  R1Violation,
  NormalizeError,
  NotFinite,
  DefectiveDependency,
  UnsupportedMoment,
  UnsupportedEigenvalue,
  UnboundParameter,
  ParamCondition,
  NotUnsolvable,
  ResourceLimit,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every analysis failure is reported through this exception. `module()` names
/// the pipeline stage, `restriction()` the violated restriction (R1/R2/R3) when
/// one applies.
class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(ErrorKind kind, std::string module, const std::string& message,
                std::string restriction = {})
      : std::runtime_error(message),
        kind_(kind),
        module_(std::move(module)),
        restriction_(std::move(restriction)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& module() const { return module_; }
  const std::string& restriction() const { return restriction_; }

  /// "error[DefectiveDependency] recurrences (R3): ..."
  std::string diagnostic() const;

 private:
  ErrorKind kind_;
  std::string module_;
  std::string restriction_;
};

class SyntaxError : public AnalysisError {
 public:
  SyntaxError(const std::string& message, int line, int column)
      : AnalysisError(ErrorKind::SyntaxError, "frontend",
                      std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace loopm
