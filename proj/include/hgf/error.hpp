#pragma once

#include <stdexcept>
#include <string>

namespace hgf {

/// A parameter restriction, precondition or input format was violated.
/// The message names the violated condition. CLI exit code 1.
class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation failed numerically (non-finite values, blow-up, step-size
/// underflow, missing level crossing). CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hgf
