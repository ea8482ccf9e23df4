#pragma once

#include <stdexcept>
#include <string>

namespace raresim {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The steady-state linear system is rank deficient beyond the replaced
/// trace row (zero-decay or otherwise degenerate parameters).
struct SingularSystemError : Error {
  using Error::Error;
};

/// A finite-difference or iterative refinement failed its internal
/// consistency check.
struct NonConvergedError : Error {
  using Error::Error;
};

/// The pattern never falls to half power inside the visible region.
struct HpbwUndefinedError : Error {
  using Error::Error;
};

/// Spatial grid of the photocurrent oracle is below the required density.
struct ResolutionTooCoarseError : Error {
  using Error::Error;
};

/// Configuration file errors; message names the offending section.field.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace raresim
