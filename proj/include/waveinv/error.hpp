#pragma once

#include <stdexcept>
#include <string>

namespace waveinv {

enum class ErrorCode {
  IncommensurateExtent,
  MarginTooSmall,
  ValueOutOfBounds,
  GridMismatch,
  CorruptHeader,
  DimensionMismatch,
  CflViolation,
  NonFiniteField,
  TraceMismatch,
  HistoryMismatch,
  LineSearchFailed,
  InvalidArgument,
  Io,
  Config,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// I/O and configuration problems map to exit code 2, everything else to 1.
  bool is_io() const noexcept {
    return code_ == ErrorCode::Io || code_ == ErrorCode::Config ||
           code_ == ErrorCode::CorruptHeader || code_ == ErrorCode::DimensionMismatch;
  }

 private:
  ErrorCode code_;
};

}  // namespace waveinv
