#include "bugexplain/error.hpp"

#include <fmt/format.h>

namespace bugexplain {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError: return "PARSE_ERROR";
    case ErrorCode::kInvalidRange: return "INVALID_RANGE";
    case ErrorCode::kMalformedDiff: return "MALFORMED_DIFF";
    case ErrorCode::kEmptyTarget: return "EMPTY_TARGET";
    case ErrorCode::kIoError: return "IO_ERROR";
    case ErrorCode::kFormatError: return "FORMAT_ERROR";
    case ErrorCode::kUnknownModel: return "UNKNOWN_MODEL";
    case ErrorCode::kEmptyCorpus: return "EMPTY_CORPUS";
    case ErrorCode::kBackendUnavailable: return "BACKEND_UNAVAILABLE";
    case ErrorCode::kConfigError: return "CONFIG_ERROR";
    case ErrorCode::kEmptyInput: return "EMPTY_INPUT";
    case ErrorCode::kDegenerate: return "DEGENERATE";
    case ErrorCode::kBadRequest: return "BAD_REQUEST";
    case ErrorCode::kNotFound: return "NOT_FOUND";
    case ErrorCode::kPayloadTooLarge: return "PAYLOAD_TOO_LARGE";
  }
  return "UNKNOWN";
}

ParseError::ParseError(int line, int column, const std::string& message)
    : Error(ErrorCode::kParseError,
            fmt::format("line {}, column {}: {}", line, column, message)),
      line_(line),
      column_(column),
      detail_(message) {}

}  // namespace bugexplain
