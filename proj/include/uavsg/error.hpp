#pragma once

#include <stdexcept>
#include <string>

namespace uavsg {

/// Base of every error raised by the library. `kind()` is a stable,
/// machine-readable tag used by the CLI when reporting failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "Error"; }
};

#define UAVSG_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                     \
   public:                                                        \
    using Error::Error;                                           \
    const char* kind() const noexcept override { return #Name; }  \
  }

/// A series or transformation did not reach its tolerance within budget.
UAVSG_DEFINE_ERROR(NonConvergence);
/// Adaptive quadrature could not meet the requested tolerance.
UAVSG_DEFINE_ERROR(QuadratureFailure);
/// mmWave beamwidth outside (0, pi/2).
UAVSG_DEFINE_ERROR(BeamDomain);
/// Zero link distance.
UAVSG_DEFINE_ERROR(DegenerateGeometry);
/// A Monte Carlo realization without any UAV.
UAVSG_DEFINE_ERROR(DegenerateRealization);
/// Malformed configuration input.
UAVSG_DEFINE_ERROR(ParseError);
/// Configuration that violates a model invariant.
UAVSG_DEFINE_ERROR(ValidationError);

#undef UAVSG_DEFINE_ERROR

}  // namespace uavsg
