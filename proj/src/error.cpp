#include "exposure_lab/error.hpp"

namespace exposure_lab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidDimensions: return "invalid-dimensions";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InvalidState: return "invalid-state";
    case ErrorKind::InvalidOperator: return "invalid-operator";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::RankDeficientState: return "rank-deficient-state";
    case ErrorKind::InconsistentPurities: return "inconsistent-purities";
    case ErrorKind::NoSolution: return "no-solution";
    case ErrorKind::TruncationError: return "truncation-error";
    case ErrorKind::IoError: return "io-error";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace exposure_lab
