#pragma once

#include <stdexcept>
#include <string>

namespace pxlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller supplied an argument outside the operation's domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (non-finite values, no bracket, no convergence).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pxlab
