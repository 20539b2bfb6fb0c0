#include "mstefan/errors.hpp"

namespace mstefan {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonSymmetricD: return "NonSymmetricD";
    case ErrorCode::NonPositiveOffDiagonal: return "NonPositiveOffDiagonal";
    case ErrorCode::NotStrictlyAdmissible: return "NotStrictlyAdmissible";
    case ErrorCode::SingularA0: return "SingularA0";
    case ErrorCode::WrongSpeciesCount: return "WrongSpeciesCount";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::InadmissibleInitialData: return "InadmissibleInitialData";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorCode::NonlinearDivergence: return "NonlinearDivergence";
    case ErrorCode::AuditFailure: return "AuditFailure";
    case ErrorCode::Aborted: return "Aborted";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NonPositiveEntropy: return "NonPositiveEntropy";
    case ErrorCode::BadReference: return "BadReference";
    case ErrorCode::InconsistentFields: return "InconsistentFields";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace mstefan
