#pragma once

#include <stdexcept>
#include <string>

namespace rail {

/// Invalid shapes, out-of-range parameters, malformed inputs.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iteration caps exceeded, instabilities, rank explosions.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Sylvester equation whose coefficient spectra intersect.
class SingularPencilError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Bad or inconsistent run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rail
