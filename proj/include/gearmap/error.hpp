#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gearmap {

enum class ErrorCode {
  PoleOnPath,
  ToleranceNotMet,
  DivisionByZeroSolution,
  PoleAtPoint,
  PrevertexSingularity,
  BranchAmbiguity,
  LatticePointPole,
  PoleAtVertex,
  NotAPregear,
  InversionFailed,
  NotCentered,
  SeedVanishes,
  TailTooLarge,
  NoRoot,
  NoRealRoots,
  LeftRegion,
  MaxIterations,
  QuadratureFailure,
  ZeroDerivative,
  InvalidArgument,
};

std::string_view error_name(ErrorCode code);

/// Structured numerical failure. The code is what the CLI reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gearmap
