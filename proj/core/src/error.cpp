#include "ellkurt/error.hpp"

namespace ellkurt {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::NotPsd: return "not-psd";
    case ErrorCode::InsufficientSample: return "insufficient-sample";
    case ErrorCode::DegenerateData: return "degenerate-data";
    case ErrorCode::MomentDoesNotExist: return "moment-does-not-exist";
    case ErrorCode::UndefinedDof: return "undefined-dof";
    case ErrorCode::InvalidDof: return "invalid-dof";
    case ErrorCode::SingularMatrix: return "singular-matrix";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::Io: return "io-error";
  }
  return "unknown";
}

}  // namespace ellkurt
