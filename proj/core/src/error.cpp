#include "proswap/error.hpp"

namespace proswap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kInvalidGuess: return "invalid-guess";
    case ErrorCode::kInvalidRequest: return "invalid-request";
    case ErrorCode::kInvalidWitness: return "invalid-witness";
    case ErrorCode::kInvalidStatement: return "invalid-statement";
    case ErrorCode::kExtractionMismatch: return "extraction-mismatch";
    case ErrorCode::kAbortProtocol: return "abort-protocol";
    case ErrorCode::kProtocolState: return "protocol-state";
    case ErrorCode::kMalformedEncoding: return "malformed-encoding";
    case ErrorCode::kInvariantViolation: return "invariant-violation";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace proswap
