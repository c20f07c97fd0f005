#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rhostat {

enum class ErrorCode {
  InvalidWeights,
  HorizonExceeded,
  HorizonMismatch,
  DegenerateInput,
  InvalidSubsequence,
  NonFiniteValue,
  MissingLevel,
  GridOutOfRange,
  InsufficientEvidence,
  InvalidTheta,
  InvalidConfig,
  DomainViolation,
  NoWitness,
  ParseError,
  IoError,
  UnknownName,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. The code lets callers (and the CLI
/// exit-status mapping) branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when construction-time validation finds a bad value; carries the
/// first offending (1-based) index.
class IndexedError : public Error {
 public:
  IndexedError(ErrorCode code, const std::string& message, std::uint64_t index)
      : Error(code, message), index_(index) {}

  std::uint64_t index() const noexcept { return index_; }

 private:
  std::uint64_t index_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace rhostat
