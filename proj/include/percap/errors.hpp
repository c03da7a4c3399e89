#ifndef PERCAP_ERRORS_HPP
#define PERCAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace percap {

// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Invalid user input: bad matrices, malformed scenario documents, out-of-range
// parameters. The CLI maps these to exit code 1.
class ValidationError : public Error {
  public:
    using Error::Error;
};

class NormalizationError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class DimensionError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

// No feasible solution exists (e.g. water-filling with all gains zero).
class InfeasibleError : public Error {
  public:
    using Error::Error;
};

// An intermediate value left the representable floating-point range.
// The CLI maps these (and other numeric errors) to exit code 2.
class OverflowError : public Error {
  public:
    using Error::Error;
};

} // namespace percap

#endif
