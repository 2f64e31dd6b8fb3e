#pragma once

#include <stdexcept>
#include <string>

namespace chemolab {

enum class ErrorCode {
  NonPositiveCoefficient,
  InvalidKappa,
  InvalidDimension,
  InvalidDomain,
  InvalidExponent,
  InvalidEps,
  DegenerateDenominator,
  TooCoarse,
  LengthMismatch,
  SingularSystem,
  StepCollapse,
  InvalidInitialData,
  InfeasibleMass,
  BadCore,
  BadWindow,
  BadExponent,
  EmptyTrace,
  ParseError,
  UnknownKey,
  ValidationError,
  IoError,
};

inline const char* to_string(ErrorCode code);

/// Exception carrying a machine-checkable code plus the offending detail
/// (a field name, a key, a path).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveCoefficient: return "NonPositiveCoefficient";
    case ErrorCode::InvalidKappa: return "InvalidKappa";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::InvalidEps: return "InvalidEps";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::TooCoarse: return "TooCoarse";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::StepCollapse: return "StepCollapse";
    case ErrorCode::InvalidInitialData: return "InvalidInitialData";
    case ErrorCode::InfeasibleMass: return "InfeasibleMass";
    case ErrorCode::BadCore: return "BadCore";
    case ErrorCode::BadWindow: return "BadWindow";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::EmptyTrace: return "EmptyTrace";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace chemolab
