#pragma once

#include <stdexcept>
#include <string>

namespace covert {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative evaluation ran out of iterations or missed its tolerance.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// An asymptotic expansion was asked to evaluate outside its validity regime.
class RegimeError : public Error {
 public:
  RegimeError(const std::string& what, double argument)
      : Error(what + " (argument " + std::to_string(argument) + ")"), argument_(argument) {}

  double argument() const noexcept { return argument_; }

 private:
  double argument_;
};

/// Requested truncation order is too large to represent.
class OrderError : public Error {
 public:
  using Error::Error;
};

/// Two routes that must agree did not; indicates a bug rather than bad input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Rate fit preconditions (point count, monotonicity) not met.
class FitError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool ok, const char* message) {
  if (!ok) throw DomainError(message);
}

}  // namespace detail
}  // namespace covert
