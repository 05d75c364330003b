#pragma once

#include <stdexcept>
#include <string>

namespace vibrodiag {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid argument or violated precondition.
struct ParameterError : Error {
  using Error::Error;
};

// Dimension or layout mismatch between related quantities.
struct ShapeError : ParameterError {
  using ParameterError::ParameterError;
};

// Malformed, missing or unreadable input data (also covers file I/O).
struct DataError : Error {
  using Error::Error;
};

// Fewer samples than the operation can work with.
struct InsufficientDataError : DataError {
  using DataError::DataError;
};

// Zero-variance signal where a variance normalizer is required.
struct DegenerateSignalError : DataError {
  using DataError::DataError;
};

// Arithmetic failure: NaN/Inf where a finite value is required.
struct NumericError : Error {
  using Error::Error;
};

// Model file rejected on load; kind identifies the failure class.
struct LoadError : DataError {
  enum class Kind { version_mismatch, dimension_mismatch, malformed };

  LoadError(Kind k, const std::string& msg) : DataError(msg), kind(k) {}

  Kind kind;
};

}  // namespace vibrodiag
