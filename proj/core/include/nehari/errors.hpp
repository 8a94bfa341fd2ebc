#pragma once

#include <stdexcept>
#include <string>

namespace nehari {

/// Base class for all solver-specific failures. Precondition violations on
/// plain arguments (odd M, eps <= 0, shape mismatch) use std::invalid_argument.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The state to be pulled back onto the Nehari manifold vanishes identically.
class ZeroFieldError : public Error {
 public:
  using Error::Error;
};

/// I_h(v) is too small for the ray scaling sqrt(K_h/I_h) to be meaningful.
class DegenerateInteractionError : public Error {
 public:
  using Error::Error;
};

/// ||grad G||_h vanishes, so the tangent projection is undefined.
class DegenerateConstraintGradientError : public Error {
 public:
  using Error::Error;
};

/// No backtracking exponent up to the cap satisfied the nonmonotone Armijo test.
class LineSearchFailedError : public Error {
 public:
  using Error::Error;
};

}  // namespace nehari
