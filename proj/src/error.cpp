#include "pfml/error.hpp"

namespace pfml {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonBinaryColumn: return "NonBinaryColumn";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::NoBinaryFeatures: return "NoBinaryFeatures";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::GroupCoverageUnsatisfiable: return "GroupCoverageUnsatisfiable";
    case ErrorCode::InsufficientCandidates: return "InsufficientCandidates";
    case ErrorCode::PoolExhausted: return "PoolExhausted";
    case ErrorCode::NumericError: return "NumericError";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return 2;
    case ErrorCode::IoError:
      return 3;
    case ErrorCode::ParseError:
    case ErrorCode::MissingColumn:
    case ErrorCode::NonBinaryColumn:
      return 4;
    case ErrorCode::DimensionMismatch:
    case ErrorCode::EmptyDataset:
    case ErrorCode::EmptyGroup:
    case ErrorCode::NoBinaryFeatures:
      return 5;
    case ErrorCode::TooSmall:
    case ErrorCode::GroupCoverageUnsatisfiable:
      return 6;
    case ErrorCode::InsufficientCandidates:
    case ErrorCode::PoolExhausted:
      return 7;
    case ErrorCode::NumericError:
      return 8;
  }
  return 1;
}

}  // namespace pfml
