#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tcap {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates a documented bound. `param()` names the offending
/// quantity (e.g. "alpha") so front ends can point at the right flag.
class DomainError : public Error {
 public:
  DomainError(std::string param, const std::string& message)
      : Error(message), param_(std::move(param)) {}

  const std::string& param() const noexcept { return param_; }

 private:
  std::string param_;
};

/// A fractional moment is requested at or beyond its existence boundary.
class DivergentMoment : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The relaxed Chebyshev bound needs mu * lambda < 1 / beta.
class ChebyshevInvalid : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A quantile was requested outside the support of a sample table.
class QuantileRange : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Antenna counts and receiver strategy do not fit together.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateInput : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Iterative numerics that failed to produce an answer.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Root bracket endpoints have the same sign.
class NoStraddle : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonConvergence : public NumericError {
 public:
  using NumericError::NumericError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tcap
