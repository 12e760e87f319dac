#include "holoqed/errors.hpp"

namespace holoqed {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::AmplitudeBound: return "AmplitudeBound";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NoProgress: return "NoProgress";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::PositivityLoss: return "PositivityLoss";
    case ErrorCode::RankDeficiency: return "RankDeficiency";
    case ErrorCode::SizeExceeded: return "SizeExceeded";
    case ErrorCode::AllRunsFailed: return "AllRunsFailed";
    case ErrorCode::Schema: return "Schema";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::OutputLocked: return "OutputLocked";
  }
  return "Unknown";
}

}  // namespace holoqed
