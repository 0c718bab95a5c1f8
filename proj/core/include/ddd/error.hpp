#pragma once

#include <stdexcept>
#include <string>

namespace ddd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated preconditions and malformed inputs (networks, surfaces, parameters).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Configuration files: parse errors, unknown keys, constraint violations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Near-singular systems, degenerate tangents, solver failures.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ddd
