#include "gearmap/error.hpp"

namespace gearmap {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::PoleOnPath: return "PoleOnPath";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::DivisionByZeroSolution: return "DivisionByZeroSolution";
    case ErrorCode::PoleAtPoint: return "PoleAtPoint";
    case ErrorCode::PrevertexSingularity: return "PrevertexSingularity";
    case ErrorCode::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorCode::LatticePointPole: return "LatticePointPole";
    case ErrorCode::PoleAtVertex: return "PoleAtVertex";
    case ErrorCode::NotAPregear: return "NotAPregear";
    case ErrorCode::InversionFailed: return "InversionFailed";
    case ErrorCode::NotCentered: return "NotCentered";
    case ErrorCode::SeedVanishes: return "SeedVanishes";
    case ErrorCode::TailTooLarge: return "TailTooLarge";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::NoRealRoots: return "NoRealRoots";
    case ErrorCode::LeftRegion: return "LeftRegion";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::ZeroDerivative: return "ZeroDerivative";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace gearmap
