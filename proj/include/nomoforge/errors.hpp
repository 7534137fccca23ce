#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nomoforge {

enum class ErrorCode {
  InvalidInput,
  GridTooLarge,
  UnsupportedKind,
  KindMismatch,
  MissingExplainability,
  PartitionViolation,
  OutOfRange,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Domain error carrying a stable code so callers (CLI, HTTP) can map it to
/// exit statuses or response codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nomoforge
