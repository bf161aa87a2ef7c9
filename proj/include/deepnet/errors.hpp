#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deepnet {

// Root of every error the library throws. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Incompatible matrix or layer dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Invalid argument value (ranges, empty grids, bad builder dims).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// An operation was called in the wrong lifecycle state (e.g. backward without forward).
class StateError : public Error {
 public:
  using Error::Error;
};

// Input data violates a contract (labels, NaN, empty datasets, stratification).
class DataError : public Error {
 public:
  using Error::Error;
};

// Malformed structured input; the message names the offending field or cell.
class ParseError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Run configuration failed schema validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t epoch, const std::string& what)
      : Error("training diverged at epoch " + std::to_string(epoch) + ": " + what), epoch_(epoch) {}

  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

}  // namespace deepnet
