#pragma once

#include <stdexcept>
#include <string>

namespace lexctrl {

// Inputs whose shapes disagree with the problem dimensions.
struct DimensionMismatch : std::invalid_argument {
  explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// Brute-force enumeration refused because 2^r would be too expensive.
struct TooLargeError : std::invalid_argument {
  explicit TooLargeError(const std::string& what) : std::invalid_argument(what) {}
};

// An augmentable row was asked to contribute curvature but no Hessian
// slice is registered for it.
struct MissingHessian : std::logic_error {
  explicit MissingHessian(const std::string& what) : std::logic_error(what) {}
};

// Scenario/config file problems (unknown keys, bad values, missing file).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// The active-set solver gave up inside a control cycle.
struct SolverFailure : std::runtime_error {
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lexctrl
