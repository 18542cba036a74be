#pragma once

#include <stdexcept>
#include <string>

namespace ftpellet {

// Base class for every error this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Conditions where a requested quantity has no finite value (e.g. the
// water term of the site balance with P_H2 = 0 but P_H2O > 0).
struct DegenerateConditions : Error {
  using Error::Error;
};

// Vacant-site fraction argument outside (0, inf).
struct InvalidSite : Error {
  using Error::Error;
};

// Geometric chain tail with ratio >= 1: the infinite product sums do not
// converge for these coefficients. Signals parameters outside the model's
// validity domain, not a numerical failure.
struct TailDiverges : Error {
  using Error::Error;
};

// Root bracketing failed where the model guarantees a bracket. Indicates
// corrupted parameters rather than a caller mistake.
struct NoBracket : Error {
  using Error::Error;
};

// Requested target lies outside the reachable range of a monotone map.
struct OutOfRange : Error {
  using Error::Error;
};

// Malformed parameter or weight file.
struct SchemaError : Error {
  using Error::Error;
};

// Tridiagonal solve hit a zero pivot. For the implicit stepper this means
// tau was too large; callers halve tau and retry.
struct SingularSystem : Error {
  using Error::Error;
};

// Initial-guess iteration exhausted its budget without meeting its own
// stopping rule.
struct GuessFailed : Error {
  using Error::Error;
};

// Effectiveness factor undefined: surface consumption rate is zero.
struct ZeroSurfaceRate : Error {
  using Error::Error;
};

// Fraction undefined: total production is zero.
struct ZeroDenominator : Error {
  using Error::Error;
};

// Relative-error metric undefined: boundary value is zero.
struct ZeroBoundary : Error {
  using Error::Error;
};

}  // namespace ftpellet
