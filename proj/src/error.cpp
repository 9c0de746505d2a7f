#include "hydrograph/error.hpp"

namespace hydrograph {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateDomainId: return "DuplicateDomainId";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::InvalidProperty: return "InvalidProperty";
    case ErrorCode::Io: return "Io";
    case ErrorCode::CorruptSnapshot: return "CorruptSnapshot";
    case ErrorCode::UnrecognizedFile: return "UnrecognizedFile";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::BadGeoJson: return "BadGeoJson";
    case ErrorCode::UnsupportedGeometry: return "UnsupportedGeometry";
    case ErrorCode::BadGrid: return "BadGrid";
    case ErrorCode::AllNodata: return "AllNodata";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::NotAWaterNode: return "NotAWaterNode";
    case ErrorCode::NotAStretch: return "NotAStretch";
    case ErrorCode::NotLandUse: return "NotLandUse";
    case ErrorCode::NoWatershed: return "NoWatershed";
    case ErrorCode::UnknownStation: return "UnknownStation";
    case ErrorCode::PathLimitExceeded: return "PathLimitExceeded";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidCredentials: return "InvalidCredentials";
    case ErrorCode::InvalidToken: return "InvalidToken";
    case ErrorCode::UnknownJob: return "UnknownJob";
  }
  return "Unknown";
}

}  // namespace hydrograph
