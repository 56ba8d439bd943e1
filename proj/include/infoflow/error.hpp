#pragma once

#include <stdexcept>
#include <string>

namespace infoflow {

/// Categories surfaced by the CLI as structured error codes.
enum class ErrorCode {
  InvalidArgument,
  CflViolation,
  NumericalFailure,
  OptimizationFailure,
  DataError,
  ConfigError,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a run produces a non-finite or overflowing state.
class SimulationError : public Error {
 public:
  SimulationError(double time, const std::string& message)
      : Error(ErrorCode::NumericalFailure, message), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace infoflow
