#pragma once

#include <stdexcept>
#include <string>

namespace tsep {

// Failure taxonomy shared by the whole library. The C API maps these
// one-to-one onto tsep_status values.
enum class ErrorCode {
  ZeroVector,
  NullVector,
  NotTimelike,
  DegenerateForm,
  DegenerateMetric,
  NoConvergence,
  SyntaxError,
  UnknownFunction,
  UnboundVariable,
  MathDomain,
  ParseError,
  UnknownCoordinate,
  AsymmetricMetric,
  ExcludedPoint,
  WrongSignature,
  NotRiemannian,
  EigencountViolation,
  ResolutionExceeded,
  InvalidArgument,
  Io,
  Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, std::string message) {
  throw Error(code, std::move(message));
}

}  // namespace tsep
