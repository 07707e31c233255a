#pragma once

#include <stdexcept>
#include <string>

namespace connect_later {

// Base for every error raised by the library. The CLI maps each subclass to
// a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition or input-format violation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A numerical routine failed (non-convergence, indefinite pivot, divergence).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A stochastic augmentation could not produce an acceptable sample.
class AugmentationError : public Error {
 public:
  using Error::Error;
};

}  // namespace connect_later
