#pragma once

#include <stdexcept>
#include <string>

namespace opcalc {

/// Base class of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (dimension mismatch, bad weights, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numeric routine could not meet its contract (bracketing failed, singular system, ...).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// The request is well formed but outside what is implemented (e.g. hulls in d > 3).
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// A work budget (pair operations, iterations) would be exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace opcalc
