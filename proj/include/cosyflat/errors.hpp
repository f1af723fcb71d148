#pragma once

#include <stdexcept>
#include <string>

namespace cosyflat {

/// Base class for every error the engine raises on purpose.
struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivisionByZero : EngineError {
  using EngineError::EngineError;
};

struct DomainError : EngineError {
  using EngineError::EngineError;
};

/// Raised by the expression parser; carries the byte offset of the failure
/// and a description of what would have been accepted there.
struct ParseError : EngineError {
  std::size_t offset;
  std::string expected;
  ParseError(std::size_t off, std::string exp)
      : EngineError("parse error at offset " + std::to_string(off) +
                    ": expected " + exp),
        offset(off),
        expected(std::move(exp)) {}
};

struct SingularMetric : EngineError {
  using EngineError::EngineError;
};

struct DegenerateFrame : EngineError {
  using EngineError::EngineError;
};

/// The eigenvalue of the shape operator is below the threshold that keeps
/// the adapted frame well defined.
struct DegenerateA : EngineError {
  using EngineError::EngineError;
};

struct DimensionError : EngineError {
  using EngineError::EngineError;
};

struct PreconditionFailed : EngineError {
  using EngineError::EngineError;
};

/// The ODE trajectory left the region where the solution stays meaningful
/// (t > 0 and D - kappa t^4 > 0); carries the last admissible z.
struct LeftAdmissibleRegion : EngineError {
  double last_valid_z;
  LeftAdmissibleRegion(const std::string& what, double z)
      : EngineError(what + " (last valid z = " + std::to_string(z) + ")"),
        last_valid_z(z) {}
};

struct InterpolationRange : EngineError {
  using EngineError::EngineError;
};

struct ConfigError : EngineError {
  using EngineError::EngineError;
};

/// A structure builder could not produce a valid structure (bad
/// parameters, or the self-verification probe failed).
struct BuildError : EngineError {
  using EngineError::EngineError;
};

struct IoError : EngineError {
  using EngineError::EngineError;
};

}  // namespace cosyflat
