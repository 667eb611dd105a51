#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace proswap {

enum class ErrorCode {
  kInvalidParameter,
  kInvalidGuess,
  kInvalidRequest,
  kInvalidWitness,
  kInvalidStatement,
  kExtractionMismatch,
  kAbortProtocol,
  kProtocolState,
  kMalformedEncoding,
  kInvariantViolation,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (and the CLI's exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace proswap
