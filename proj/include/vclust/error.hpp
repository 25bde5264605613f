#pragma once

#include <stdexcept>
#include <string>

namespace vclust {

/// Precondition or argument-domain violation (bad dimensions, ν out of range, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or unusable input data (ragged CSV, zero-variance column, empty file).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not produce a usable answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vclust
