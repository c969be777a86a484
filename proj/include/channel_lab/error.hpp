#pragma once

#include <stdexcept>
#include <string>

namespace channel_lab {

// Base class for every error raised by the library. The CLI maps the
// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not fit together (e.g. a 3x3 state fed to a qubit channel).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input is well-formed but violates a mathematical precondition: trace
// preservation, unitarity, orthonormality, probability normalization.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Two independent evaluation routes disagree, or a result is not finite.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Malformed channel specification document.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace channel_lab
