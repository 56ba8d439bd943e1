#include "infoflow/error.hpp"

namespace infoflow {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::CflViolation: return "cfl_violation";
    case ErrorCode::NumericalFailure: return "numerical_failure";
    case ErrorCode::OptimizationFailure: return "optimization_failure";
    case ErrorCode::DataError: return "data_error";
    case ErrorCode::ConfigError: return "config_error";
    case ErrorCode::IoError: return "io_error";
  }
  return "unknown";
}

}  // namespace infoflow
