#pragma once

#include <stdexcept>
#include <string>

namespace pflow {

enum class ErrorCode {
  NormBoundViolation,
  SelfIntersection,
  EmptySet,
  GridTooCoarse,
  MeshFailure,
  IncompatibleData,
  SingularSystem,
  MissingClamp,
  NonConvergence,
  LengthMismatch,
  EmptyPool,
  InfeasibleProblem,
  ConfigError,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NormBoundViolation: return "NormBoundViolation";
    case ErrorCode::SelfIntersection: return "SelfIntersection";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::MeshFailure: return "MeshFailure";
    case ErrorCode::IncompatibleData: return "IncompatibleData";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::MissingClamp: return "MissingClamp";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::InfeasibleProblem: return "InfeasibleProblem";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(to_string(code)) + ": " + msg),
        code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pflow
