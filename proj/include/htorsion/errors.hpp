#pragma once

#include <stdexcept>
#include <string>

namespace htorsion {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: malformed documents, bad indices, non-Hermitian metrics.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class DimensionMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// The almost complex structure fails the Nijenhuis condition.
class NotIntegrable : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class JacobiViolation : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class SingularFrame : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class UnknownCatalogEntry : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Non-finite values or a breakdown inside an otherwise valid computation.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace htorsion
