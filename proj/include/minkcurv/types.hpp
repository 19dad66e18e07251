#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace minkcurv {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

// Failure categories surfaced through the C API as status codes.
// Values are stable; append only.
enum class ErrorCode {
  InvalidInput = 1,
  InvalidNorm = 2,
  NonConvergence = 3,
  DegenerateCurvature = 4,
  DegenerateChart = 5,
  TangencyViolation = 6,
  QuadratureNotConverged = 7,
  NonPositiveMeanCurvature = 8,
  OrientationError = 9,
  SingularOffset = 10,
  UnsafeOffset = 11,
  RayEscapedAtlas = 12,
  StepSizeUnderflow = 13,
  FlatPoint = 14,
  NonPositiveCurvature = 15,
  ComplexEigenvalues = 16,
  ConfigError = 17,
  Internal = 18,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace minkcurv
