#pragma once

#include <stdexcept>
#include <string>

namespace dsattack {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Exact integer arithmetic would exceed its fixed-width representation.
class ArithmeticOverflowError : public Error {
 public:
  using Error::Error;
};

/// A formula has a removable or essential singularity at the requested point
/// (e.g. p_A = 0.5 in closed forms with a (p_M - p_m) denominator).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A series did not meet its tail bound within the term cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double partial_value, std::size_t terms)
      : Error(what), partial_value_(partial_value), terms_(terms) {}

  double partial_value() const noexcept { return partial_value_; }
  std::size_t terms() const noexcept { return terms_; }

 private:
  double partial_value_;
  std::size_t terms_;
};

/// The requested quantity is undefined (e.g. a conditional mean given an event of probability 0).
class UndefinedError : public Error {
 public:
  using Error::Error;
};

/// No closed form exists for the requested model; use the Monte Carlo estimator.
class UnsupportedAnalyticError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration was asked for more work than the cost guard allows.
class CostGuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace dsattack
