#pragma once

#include <stdexcept>
#include <string>

namespace ellkurt {

enum class ErrorCode {
  InvalidParameter,
  NotPsd,
  InsufficientSample,
  DegenerateData,
  MomentDoesNotExist,
  UndefinedDof,
  InvalidDof,
  SingularMatrix,
  DimensionMismatch,
  ParseError,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ellkurt
