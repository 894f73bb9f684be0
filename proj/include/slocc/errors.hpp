#pragma once

#include <stdexcept>
#include <string>

namespace slocc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A digit or flat index outside the range allowed by its Dims.
class InvalidIndex : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation would produce (or was handed) the zero vector.
class ZeroState : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Exact value does not fit the requested machine representation.
class Overflow : public Error {
 public:
  using Error::Error;
};

}  // namespace slocc
