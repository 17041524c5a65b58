#pragma once

#include <stdexcept>
#include <string>

namespace autobid {

/// Malformed input: bad file contents, shape mismatch, invalid profile.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A parameter lies outside the range an operation requires.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Grid enumeration would exceed the configured budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace autobid
