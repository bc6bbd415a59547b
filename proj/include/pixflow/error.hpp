#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pixflow {

enum class ErrorCode {
  FileNotFound,
  UnsupportedFormat,
  CorruptImage,
  InvalidConfig,
  InvalidCrop,
  UpscaleNotSupported,
  EmptyGraph,
  DisconnectedForcing,
  SolveFailure,
  NotConverged,
  BetaSingular,
  EmptyFilter,
  DegenerateTree,
  PreconditionViolation,
  TooFewLeaves,
  Disconnected,
  AllRunsFailed,
  UsageError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pixflow
