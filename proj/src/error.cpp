#include "rrc/error.hpp"

namespace rrc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotMultiple: return "NotMultiple";
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::ThresholdOutOfRange: return "ThresholdOutOfRange";
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::InvalidPoints: return "InvalidPoints";
    case ErrorCode::FieldTooSmall: return "FieldTooSmall";
    case ErrorCode::NotConstructible: return "NotConstructible";
    case ErrorCode::HomogeneousUseMsr: return "HomogeneousUseMSR";
    case ErrorCode::SearchFailed: return "SearchFailed";
    case ErrorCode::UnsupportedRegime: return "UnsupportedRegime";
    case ErrorCode::UnsupportedRepairTarget: return "UnsupportedRepairTarget";
    case ErrorCode::InvalidHelpers: return "InvalidHelpers";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::BelowMinimumBandwidth: return "BelowMinimumBandwidth";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::DecodeFailed: return "DecodeFailed";
    case ErrorCode::NeedSearch: return "NeedSearch";
    case ErrorCode::CorruptChunk: return "CorruptChunk";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace rrc
