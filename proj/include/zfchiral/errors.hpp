#pragma once

#include <stdexcept>
#include <string>

namespace zfchiral {

/// Bad input: malformed arguments, violated preconditions, config errors.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation failed at runtime (NaN, non-convergence, I/O).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zfchiral
