#pragma once

#include <stdexcept>
#include <string>

namespace cobs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unusable input data (CSV, JSON documents, arguments).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An operation was requested in a state that does not admit it.
class InvalidState : public Error {
 public:
  using Error::Error;
};

class BudgetExhausted : public InvalidState {
 public:
  BudgetExhausted() : InvalidState("query budget exhausted") {}
};

class PoolExhausted : public InvalidState {
 public:
  PoolExhausted() : InvalidState("candidate pair pool exhausted") {}
};

/// The eigensolver could not produce a usable spectral embedding.
class SpectralFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace cobs
