#include "minkcurv/types.hpp"

namespace minkcurv {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidNorm: return "InvalidNorm";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DegenerateCurvature: return "DegenerateCurvature";
    case ErrorCode::DegenerateChart: return "DegenerateChart";
    case ErrorCode::TangencyViolation: return "TangencyViolation";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::NonPositiveMeanCurvature: return "NonPositiveMeanCurvature";
    case ErrorCode::OrientationError: return "OrientationError";
    case ErrorCode::SingularOffset: return "SingularOffset";
    case ErrorCode::UnsafeOffset: return "UnsafeOffset";
    case ErrorCode::RayEscapedAtlas: return "RayEscapedAtlas";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::FlatPoint: return "FlatPoint";
    case ErrorCode::NonPositiveCurvature: return "NonPositiveCurvature";
    case ErrorCode::ComplexEigenvalues: return "ComplexEigenvalues";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace minkcurv
