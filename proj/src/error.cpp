#include "vcontract/error.hpp"

namespace vcontract {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSample: return "InvalidSample";
    case ErrorKind::InvalidCoordinate: return "InvalidCoordinate";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::NumericalError: return "NumericalError";
    case ErrorKind::InvalidNormalization: return "InvalidNormalization";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::DegenerateAllocation: return "DegenerateAllocation";
    case ErrorKind::InvalidProfile: return "InvalidProfile";
    case ErrorKind::InvalidBlocking: return "InvalidBlocking";
    case ErrorKind::DegenerateCore: return "DegenerateCore";
    case ErrorKind::CertificationFailed: return "CertificationFailed";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace vcontract
