#pragma once

#include <stdexcept>
#include <string>

namespace gnewton {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class NonFiniteValue : public Error {
public:
  using Error::Error;
};

/// Symmetric eigensolve did not reach the off-diagonal tolerance within the sweep cap.
class EigenNonConvergence : public Error {
public:
  using Error::Error;
};

class SingularOperator : public Error {
public:
  using Error::Error;
};

/// Banach's lemma needs ||B - I|| < 1.
class NotContractive : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class InvalidMajorant : public Error {
public:
  using Error::Error;
};

/// The symmetric part of the linearization is not positive definite.
class NotStronglyMonotone : public Error {
public:
  using Error::Error;
};

class MaxIterExceeded : public Error {
public:
  using Error::Error;
};

class PreconditionViolated : public Error {
public:
  using Error::Error;
};

class Unsupported : public Error {
public:
  using Error::Error;
};

class InvalidProblem : public Error {
public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace gnewton
