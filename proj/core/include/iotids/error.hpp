#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iotids {

enum class ErrorCode {
  Usage,
  Io,
  MissingColumn,
  UnparsableTimestamp,
  UnparsableValue,
  UnknownClass,
  InconsistentAnnotation,
  InvalidSchedule,
  PartitionInfeasible,
  MissingStats,
  EmptyTraining,
  FormatMismatch,
  UndefinedRate,
  DegenerateInput,
  SingleClass,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// All library failures are reported through this type; the code drives the
// CLI exit status and the machine-readable error document.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace iotids
