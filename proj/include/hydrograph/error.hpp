#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hydrograph {

enum class ErrorCode {
  // graph store
  DuplicateDomainId,
  SchemaViolation,
  SelfLoop,
  DuplicateEdge,
  UnknownNode,
  UnknownEdge,
  InvalidProperty,
  Io,
  CorruptSnapshot,
  // ingest
  UnrecognizedFile,
  BadHeader,
  BadGeoJson,
  UnsupportedGeometry,
  BadGrid,
  // drainage
  AllNodata,
  CycleDetected,
  OutOfBounds,
  // queries
  NotAWaterNode,
  NotAStretch,
  NotLandUse,
  NoWatershed,
  UnknownStation,
  PathLimitExceeded,
  InvalidArgument,
  // service
  InvalidCredentials,
  InvalidToken,
  UnknownJob,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hydrograph
