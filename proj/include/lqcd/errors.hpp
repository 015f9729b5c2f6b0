#pragma once

#include <stdexcept>
#include <string>

namespace lqcd {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid extents, coordinates out of range, or mismatched field geometries.
struct GeometryError : Error {
  using Error::Error;
};

struct NotSpecialUnitary : Error {
  using Error::Error;
};

// Thrown by compress() when |U[0][2]| is below the pivot threshold; the
// caller stores the link raw instead.
struct PivotTooSmall : Error {
  using Error::Error;
};

// Malformed header, unknown version, kind/precision/geometry mismatch.
struct FormatError : Error {
  using Error::Error;
};

struct ChecksumError : FormatError {
  using FormatError::FormatError;
};

struct SolverError : Error {
  using Error::Error;
};

struct ModelError : Error {
  using Error::Error;
};

}  // namespace lqcd
