#pragma once

#include <stdexcept>
#include <string>

namespace pfml {

enum class ErrorCode {
  InvalidArgument,
  IoError,
  ParseError,
  MissingColumn,
  NonBinaryColumn,
  DimensionMismatch,
  EmptyDataset,
  EmptyGroup,
  NoBinaryFeatures,
  TooSmall,
  GroupCoverageUnsatisfiable,
  InsufficientCandidates,
  PoolExhausted,
  NumericError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* error_name(ErrorCode code);

// Process exit code for an error family; 0 is reserved for success.
int exit_code_for(ErrorCode code);

}  // namespace pfml
