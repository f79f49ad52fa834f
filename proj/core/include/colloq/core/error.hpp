#pragma once

#include <stdexcept>
#include <string>

namespace colloq {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (a probability outside [0,1], a threshold larger than n, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A request exceeds an enumeration or state-space cap.
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace colloq
