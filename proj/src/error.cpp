#include "qecm/error.hpp"

namespace qecm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DimensionOverflow: return "DimensionOverflow";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MixedArity: return "MixedArity";
    case ErrorKind::BadProbability: return "BadProbability";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::EmptyCode: return "EmptyCode";
    case ErrorKind::ConditionsViolated: return "ConditionsViolated";
    case ErrorKind::DegenerateError: return "DegenerateError";
    case ErrorKind::BadN: return "BadN";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::RecoveryDimensionMismatch: return "RecoveryDimensionMismatch";
    case ErrorKind::MissingParam: return "MissingParam";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoConvergence:
    case ErrorKind::NotPSD:
    case ErrorKind::ConditionsViolated:
    case ErrorKind::DegenerateError:
    case ErrorKind::DegenerateInput:
      return true;
    default:
      return false;
  }
}

}  // namespace qecm
