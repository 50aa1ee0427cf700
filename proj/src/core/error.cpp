#include "core/error.hpp"

namespace tsep {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NullVector: return "NullVector";
    case ErrorCode::NotTimelike: return "NotTimelike";
    case ErrorCode::DegenerateForm: return "DegenerateForm";
    case ErrorCode::DegenerateMetric: return "DegenerateMetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::MathDomain: return "MathDomain";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownCoordinate: return "UnknownCoordinate";
    case ErrorCode::AsymmetricMetric: return "AsymmetricMetric";
    case ErrorCode::ExcludedPoint: return "ExcludedPoint";
    case ErrorCode::WrongSignature: return "WrongSignature";
    case ErrorCode::NotRiemannian: return "NotRiemannian";
    case ErrorCode::EigencountViolation: return "EigencountViolation";
    case ErrorCode::ResolutionExceeded: return "ResolutionExceeded";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Internal: return "Internal";
  }
  return "Internal";
}

}  // namespace tsep
