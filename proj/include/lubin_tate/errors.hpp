#pragma once

#include <stdexcept>
#include <string>

namespace lubin_tate {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ArithmeticError : Error {
  using Error::Error;
};

struct NotPIntegral : ArithmeticError {
  using ArithmeticError::ArithmeticError;
};

struct DomainError : Error {
  using Error::Error;
};

struct ContextMismatch : Error {
  using Error::Error;
};

/// A requested truncation order exceeds what the inputs determine.
struct InsufficientPrecision : Error {
  using Error::Error;
};

struct ConvergenceError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace lubin_tate
