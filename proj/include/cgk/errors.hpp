#pragma once

#include <stdexcept>
#include <string>

namespace cgk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different residue rings.
class RingMismatch : public Error {
 public:
  using Error::Error;
};

/// Operation needs a field (r = 1) but got a local ring.
class NotAField : public Error {
 public:
  using Error::Error;
};

/// Input outside the supported domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Prime is in the excluded set for the group family.
class BadPrime : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An enumeration needed more candidates than its budget allows.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace cgk
