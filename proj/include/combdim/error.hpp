#pragma once

#include <stdexcept>
#include <string>

namespace combdim {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A requested level exceeds the configured depth or materialization cap.
struct DepthError : Error {
  using Error::Error;
};

/// The (lambda, p) pair violates 2 * lambda^(2-p) < 1.
struct AdmissibilityError : Error {
  using Error::Error;
};

/// An argument violates an operation's precondition.
struct PreconditionError : Error {
  using Error::Error;
};

/// A raster would exceed the configured memory cap.
struct CapacityError : Error {
  using Error::Error;
};

/// Root bracketing failed.
struct NoRootError : Error {
  using Error::Error;
};

/// Not enough distinct data to fit a regression.
struct RegressionError : Error {
  using Error::Error;
};

/// Adaptive quadrature ran out of its subdivision budget on one segment.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, double ax, double ay, double bx, double by)
      : Error(what + " on segment (" + std::to_string(ax) + ", " + std::to_string(ay) + ") -> (" +
              std::to_string(bx) + ", " + std::to_string(by) + ")"),
        segment{ax, ay, bx, by} {}
  double segment[4];
};

/// Wraps a failure raised inside one stage of the experiment pipeline.
struct StageError : Error {
  StageError(std::string stage_name, const std::string& what)
      : Error("[" + stage_name + "] " + what), stage(std::move(stage_name)) {}
  std::string stage;
};

}  // namespace combdim
