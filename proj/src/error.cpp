#include "recur/error.hpp"

namespace recur {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::NoBranchingSymbol: return "NoBranchingSymbol";
    case ErrorKind::EmptyAlphabet: return "EmptyAlphabet";
    case ErrorKind::EmptySurvivor: return "EmptySurvivor";
    case ErrorKind::InfeasibleTarget: return "InfeasibleTarget";
    case ErrorKind::HorizonTooShort: return "HorizonTooShort";
    case ErrorKind::NotExpanding: return "NotExpanding";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::BoundaryOrbit: return "BoundaryOrbit";
    case ErrorKind::InadmissibleWord: return "InadmissibleWord";
    case ErrorKind::ZeroMassCylinder: return "ZeroMassCylinder";
    case ErrorKind::SourceInfeasible: return "SourceInfeasible";
    case ErrorKind::BirkhoffMiss: return "BirkhoffMiss";
    case ErrorKind::Censored: return "Censored";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidArgument:
      return 2;
    case ErrorKind::HorizonTooShort:
    case ErrorKind::Censored:
      return 4;
    default:
      return 3;
  }
}

}  // namespace recur
