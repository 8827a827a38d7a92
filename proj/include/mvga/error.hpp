#pragma once

#include <stdexcept>
#include <string>

namespace mvga {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied an argument outside the operation's domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A stacked vector or map does not match the expected (m, d, order) layout.
class LayoutMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// The collocation map gives the constant polynomial zero G-norm.
class DegenerateMap : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared during a computation.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace mvga
