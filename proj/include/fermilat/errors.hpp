#pragma once

#include <stdexcept>
#include <string>

namespace fermilat {

/// Error categories; the numeric values double as CLI exit codes and are part
/// of the public contract (0 = success, 1 = check verdict false).
enum class ErrorCode : int {
  Parse = 2,
  Solver = 3,
  Interpolation = 4,
  Precondition = 5,
  NotSeparable = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(code_); }

 private:
  ErrorCode code_;
};

#define FERMILAT_DEFINE_ERROR(Name, Code)             \
  struct Name : Error {                               \
    explicit Name(const std::string& message)         \
        : Error(ErrorCode::Code, message) {}          \
  }

FERMILAT_DEFINE_ERROR(ParseError, Parse);

FERMILAT_DEFINE_ERROR(EigensolverFailure, Solver);
FERMILAT_DEFINE_ERROR(SamplingExhausted, Solver);

FERMILAT_DEFINE_ERROR(InterpolationInconsistency, Interpolation);
FERMILAT_DEFINE_ERROR(MissingLeadingTerm, Interpolation);

FERMILAT_DEFINE_ERROR(ZeroComponent, Precondition);
FERMILAT_DEFINE_ERROR(HermitianSymmetryViolation, Precondition);
FERMILAT_DEFINE_ERROR(ShapeMismatch, Precondition);
FERMILAT_DEFINE_ERROR(LatticeMismatch, Precondition);
FERMILAT_DEFINE_ERROR(DimensionMismatch, Precondition);
FERMILAT_DEFINE_ERROR(NotCoprime, Precondition);
FERMILAT_DEFINE_ERROR(DimensionTooSmall, Precondition);
FERMILAT_DEFINE_ERROR(InvalidShell, Precondition);
FERMILAT_DEFINE_ERROR(PreconditionFailed, Precondition);

FERMILAT_DEFINE_ERROR(NotSeparable, NotSeparable);

#undef FERMILAT_DEFINE_ERROR

}  // namespace fermilat
