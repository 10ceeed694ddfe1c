#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wckp {

enum class ErrorCode {
  EmptySpace,
  NonpositiveWeight,
  BadNormalization,
  NonFiniteValue,
  SizeMismatch,
  NegativeDensity,
  BadExponent,
  BadOrder,
  NegativeWeightFunction,
  NoConvergence,
  OracleNotConverged,
  NegativeG,
  NotDominated,
  NotCentered,
  ZeroFunction,
  SolverFailure,
  BadMetric,
  UnknownProfile,
  ConfigError,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Every library failure is reported through this type; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wckp
