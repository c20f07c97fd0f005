#include "rhostat/error.hpp"

namespace rhostat {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidWeights: return "invalid-weights";
    case ErrorCode::HorizonExceeded: return "horizon-exceeded";
    case ErrorCode::HorizonMismatch: return "horizon-mismatch";
    case ErrorCode::DegenerateInput: return "degenerate-input";
    case ErrorCode::InvalidSubsequence: return "invalid-subsequence";
    case ErrorCode::NonFiniteValue: return "non-finite-value";
    case ErrorCode::MissingLevel: return "missing-level";
    case ErrorCode::GridOutOfRange: return "grid-out-of-range";
    case ErrorCode::InsufficientEvidence: return "insufficient-evidence";
    case ErrorCode::InvalidTheta: return "invalid-theta";
    case ErrorCode::InvalidConfig: return "invalid-config";
    case ErrorCode::DomainViolation: return "domain-violation";
    case ErrorCode::NoWitness: return "no-witness";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::IoError: return "io-error";
    case ErrorCode::UnknownName: return "unknown-name";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace rhostat
