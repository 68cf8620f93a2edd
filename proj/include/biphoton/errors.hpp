#pragma once

#include <stdexcept>
#include <string>

namespace biphoton {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: malformed config, unknown names, inconsistent parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operands with incompatible block layouts or grids.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Arguments outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A grid does not capture enough of a distribution's mass.
class CoverageError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Process exit code for an error: 2 for configuration problems, 3 for numeric-domain ones.
inline int exit_code_for(const Error& e) {
  if (dynamic_cast<const DomainError*>(&e) != nullptr) return 3;
  return 2;
}

}  // namespace biphoton
