#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace halbach {

enum class ErrorCode {
  ParseError,
  MissingKey,
  UnknownKey,
  NonPositiveLength,
  InvalidValue,
  UnsupportedPhaseCount,
  OffsetExceedsGap,
  InvalidMagnetCount,
  InvalidTruncation,
  IndexOutOfRange,
  SingularSystem,
  OutOfDomain,
  NoConvergence,
  ZeroVelocity,
  ZeroLoss,
  EmptyBounds,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace halbach
