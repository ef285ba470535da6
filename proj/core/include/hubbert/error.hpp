#pragma once

#include <stdexcept>
#include <string>

namespace hubbert {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its mathematical domain (eta <= 0, alpha not in (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Times are not in the required order (s >= t, non-increasing grid, ...).
class OrderingError : public Error {
 public:
  using Error::Error;
};

/// The supplied URR estimate is inconsistent with the observed cumulative production.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// The optimizer could not find a single feasible point to start from.
class InitializationError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be inverted is singular or nearly so.
class ConditioningError : public Error {
 public:
  ConditioningError(const std::string& what, double condition_number)
      : Error(what), condition_number_(condition_number) {}

  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

/// A computed quantity came out numerically invalid (e.g. a negative variance).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hubbert
