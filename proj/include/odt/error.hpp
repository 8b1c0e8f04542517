#pragma once

#include <stdexcept>

namespace odt {

// Invalid input or configuration. The CLI maps it to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Failure while running a computation, subprocess or file operation (exit code 2).
class RuntimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace odt
