#pragma once

#include <stdexcept>
#include <string>

namespace valvelab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated by a caller-supplied argument.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (PRBS taps, preset files, scenario keys).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values encountered during a numeric update.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Data does not excite the model class (rank deficiency, bad conditioning).
class IdentifiabilityError : public Error {
 public:
  using Error::Error;
};

/// Controller synthesis failed.
class DesignError : public Error {
 public:
  using Error::Error;
};

/// A·H_S and B·H_R share a root, so the Bezout equation has no unique solution.
class CommonFactorError : public DesignError {
 public:
  using DesignError::DesignError;
};

/// Degrees of the requested closed-loop polynomial are incompatible with the plant.
class SpecificationError : public DesignError {
 public:
  using DesignError::DesignError;
};

}  // namespace valvelab
