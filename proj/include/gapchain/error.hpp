#pragma once

#include <stdexcept>
#include <string>

namespace gapchain {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric quantity was requested outside the domain where it is defined
/// (e.g. an iterated logarithm that is not positive).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inputs violate a documented precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace gapchain
