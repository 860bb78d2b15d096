#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace voxflow {

enum class ErrorCode {
  InvalidArgument,
  // volume / transforms
  RegionOutOfBounds,
  InvalidVolume,
  AxisTooShort,
  // pipeline and text formats
  SchemaError,
  JsonMalformed,
  RangeError,
  // weight inflation
  EvenDepthCenter,
  ShapeMismatch,
  KernelLargerThanInput,
  // metrics / reliability / sampler
  EmptySet,
  OneClassOnly,
  IdMismatch,
  SplitInfeasible,
  InfeasibleBatch,
  // roi / heatmap
  NotRGB,
  NoContourFound,
  ShapeIncompatible,
  // binary formats and files
  IoError,
  BadMagic,
  UnsupportedVersion,
  TruncatedFile,
  SizeMismatch,
  DtypeUnknown,
  OverlappingOffsets,
  NonContiguousIndices,
  MixedDimensions,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// Process exit code for a failure of the given kind:
/// 1 usage, 2 I/O, 3 schema, 4 shape, 5 infeasible.
int exit_code_for(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }
  /// Same error with `context: ` prepended to the message.
  Error with_context(const std::string& context) const { return Error(code_, context + ": " + detail_); }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace voxflow
