#pragma once

#include <stdexcept>
#include <string>

namespace zdet {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad files, invalid models, unsupported configurations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument was violated (e.g. a <= 0, r <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An operation was asked to act on a zero mode of B where it is undefined.
class KernelModeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A computation could not reach its accuracy contract.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class PoleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TailFitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BranchCutError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IllConditionedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace zdet
