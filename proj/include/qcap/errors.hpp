#pragma once

#include <stdexcept>
#include <string>

namespace qcap {

// Base of all library errors. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments, dimension mismatches, unreadable files.
class InputError : public Error {
 public:
  using Error::Error;
};

// A mathematical precondition does not hold (non-Hermitian, not CP,
// trace-decreasing where trace preservation is required, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A construction would exceed the configured dimension or work cap.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcap
