#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lrsep {

// Base of every library error. The CLI maps ValidationError to exit code 2
// and NumericError to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, double residual, int sweeps)
      : NumericError(what), residual_(residual), sweeps_(sweeps) {}
  double residual() const noexcept { return residual_; }
  int sweeps() const noexcept { return sweeps_; }

 private:
  double residual_;
  int sweeps_;
};

class OverflowError : public NumericError {
 public:
  OverflowError(const std::string& what, std::size_t step)
      : NumericError(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

// Raised when a request is too large for the configured work limit; this is
// a property of the input, so it is reported as a validation failure.
class BudgetExceeded : public ValidationError {
 public:
  BudgetExceeded(const std::string& what, double required, double limit)
      : ValidationError(what), required_(required), limit_(limit) {}
  double required() const noexcept { return required_; }
  double limit() const noexcept { return limit_; }

 private:
  double required_;
  double limit_;
};

class PrecisionError : public NumericError {
 public:
  PrecisionError(const std::string& what, unsigned required_digits)
      : NumericError(what), required_digits_(required_digits) {}
  unsigned required_digits() const noexcept { return required_digits_; }

 private:
  unsigned required_digits_;
};

inline void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace lrsep
