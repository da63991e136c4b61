#pragma once

#include <stdexcept>
#include <string>

namespace relpur {

// Invalid scenario description or CLI input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Eigensolver failure, violated numerical precondition, refused analytic path.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown by analytic infinite-time averages when the occupied spectrum has
// colliding energy gaps.
class DegenerateGapsError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace relpur
