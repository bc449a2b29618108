#pragma once

#include <stdexcept>
#include <string>

namespace deepsc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates an operation's preconditions (shape, length, range).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed or unsupported file content.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown: non-finite loss, degenerate channel, zero-power block.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace deepsc
