#include "dpmod/error.hpp"

namespace dpmod {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::DegenerateCell: return "DegenerateCell";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::MeshMismatch: return "MeshMismatch";
    case ErrorCode::NotSPD: return "NotSPD";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NonpositiveExponent: return "NonpositiveExponent";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::NonpositiveScale: return "NonpositiveScale";
    case ErrorCode::SameVertex: return "SameVertex";
    case ErrorCode::ZeroDistancePair: return "ZeroDistancePair";
    case ErrorCode::NonConverged: return "NonConverged";
    case ErrorCode::InfeasibleNormalization: return "InfeasibleNormalization";
    case ErrorCode::TooManyVertices: return "TooManyVertices";
    case ErrorCode::NotOneDimensional: return "NotOneDimensional";
    case ErrorCode::BadSchedule: return "BadSchedule";
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace dpmod
