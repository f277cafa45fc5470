#pragma once

#include <stdexcept>
#include <string>

namespace areasig {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  NotSimple,
  Degenerate,
  VertexCountMismatch,
  TwoArcViolation,
  NoSolution,
  NotTCGLSource,
  NoVerticesDetected,
  AngleSolveFailed,
  ClosureFailure,
  FrameLoss,
  VertexPoint,
  SingularSystem,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure the library reports carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace areasig
