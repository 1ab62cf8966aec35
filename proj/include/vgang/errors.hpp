#ifndef VGANG_ERRORS_HPP
#define VGANG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vgang {

/**
 * Base class for all toolkit errors. Carries a stable machine-readable
 * `kind` tag which the CLI maps onto its error JSON output.
 */
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

/// Invariant violation while constructing a model type.
struct ModelError : Error {
  explicit ModelError(const std::string& m) : Error("model_error", m) {}
};

/// Virtual-gang members do not share a common period.
struct PeriodMismatchError : Error {
  explicit PeriodMismatchError(const std::string& m)
      : Error("period_mismatch", m) {}
};

/// A gang would need more cores than the platform has.
struct NotViableError : Error {
  explicit NotViableError(const std::string& m) : Error("not_viable", m) {}
};

struct TaskNotInGangError : Error {
  explicit TaskNotInGangError(const std::string& m)
      : Error("task_not_in_gang", m) {}
};

/// Brute-force formation refused: configuration count exceeds the cap.
struct ConfigSpaceTooLargeError : Error {
  explicit ConfigSpaceTooLargeError(const std::string& m)
      : Error("config_space_too_large", m) {}
};

/// A combinatorial count exceeds the 64-bit arithmetic width.
struct CountOverflowError : Error {
  explicit CountOverflowError(const std::string& m)
      : Error("count_overflow", m) {}
};

struct InvalidConfigError : Error {
  explicit InvalidConfigError(const std::string& m)
      : Error("invalid_config", m) {}
};

struct IncompleteTraceError : Error {
  explicit IncompleteTraceError(const std::string& m)
      : Error("incomplete_trace", m) {}
};

/// Generator could not fill the utilization target within rounding.
struct UnreachableTargetError : Error {
  explicit UnreachableTargetError(const std::string& m)
      : Error("unreachable_target", m) {}
};

/// Malformed input file or JSON document.
struct SchemaError : Error {
  explicit SchemaError(const std::string& m) : Error("schema_error", m) {}
};

}  // namespace vgang

#endif  // VGANG_ERRORS_HPP
