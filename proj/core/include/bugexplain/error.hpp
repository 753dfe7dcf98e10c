#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bugexplain {

enum class ErrorCode {
  kParseError,
  kInvalidRange,
  kMalformedDiff,
  kEmptyTarget,
  kIoError,
  kFormatError,
  kUnknownModel,
  kEmptyCorpus,
  kBackendUnavailable,
  kConfigError,
  kEmptyInput,
  kDegenerate,
  kBadRequest,
  kNotFound,
  kPayloadTooLarge,
};

/// Wire name of an error code, e.g. "PARSE_ERROR".
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Syntax error in Python source. Line and column are 1-indexed.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  /// Message without the location prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

}  // namespace bugexplain
