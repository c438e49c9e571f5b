#pragma once

#include <stdexcept>

namespace vex {

// Bad problem files, malformed expressions, missing keys.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mathematically invalid inputs: exponents out of range, grid mismatches,
// undefined critical exponents.  Messages name the offending node or field.
struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterations that fail to converge; messages carry the bracket or residual
// state at the point of failure.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vex
