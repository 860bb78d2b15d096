#include "voxflow/error.hpp"

namespace voxflow {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::RegionOutOfBounds: return "RegionOutOfBounds";
    case ErrorCode::InvalidVolume: return "InvalidVolume";
    case ErrorCode::AxisTooShort: return "AxisTooShort";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::JsonMalformed: return "JsonMalformed";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::EvenDepthCenter: return "EvenDepthCenter";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::KernelLargerThanInput: return "KernelLargerThanInput";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::OneClassOnly: return "OneClassOnly";
    case ErrorCode::IdMismatch: return "IdMismatch";
    case ErrorCode::SplitInfeasible: return "SplitInfeasible";
    case ErrorCode::InfeasibleBatch: return "InfeasibleBatch";
    case ErrorCode::NotRGB: return "NotRGB";
    case ErrorCode::NoContourFound: return "NoContourFound";
    case ErrorCode::ShapeIncompatible: return "ShapeIncompatible";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::DtypeUnknown: return "DtypeUnknown";
    case ErrorCode::OverlappingOffsets: return "OverlappingOffsets";
    case ErrorCode::NonContiguousIndices: return "NonContiguousIndices";
    case ErrorCode::MixedDimensions: return "MixedDimensions";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return 1;
    case ErrorCode::IoError:
    case ErrorCode::BadMagic:
    case ErrorCode::UnsupportedVersion:
    case ErrorCode::TruncatedFile:
    case ErrorCode::SizeMismatch:
    case ErrorCode::DtypeUnknown:
    case ErrorCode::NonContiguousIndices:
    case ErrorCode::MixedDimensions:
      return 2;
    case ErrorCode::SchemaError:
    case ErrorCode::JsonMalformed:
    case ErrorCode::RangeError:
    case ErrorCode::OverlappingOffsets:
      return 3;
    case ErrorCode::RegionOutOfBounds:
    case ErrorCode::InvalidVolume:
    case ErrorCode::EvenDepthCenter:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::KernelLargerThanInput:
    case ErrorCode::NotRGB:
    case ErrorCode::ShapeIncompatible:
    case ErrorCode::AxisTooShort:
      return 4;
    case ErrorCode::EmptySet:
    case ErrorCode::OneClassOnly:
    case ErrorCode::IdMismatch:
    case ErrorCode::SplitInfeasible:
    case ErrorCode::InfeasibleBatch:
    case ErrorCode::NoContourFound:
      return 5;
  }
  return 1;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace voxflow
