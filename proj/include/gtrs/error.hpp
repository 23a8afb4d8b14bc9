#pragma once

#include <stdexcept>
#include <string>

namespace gtrs {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration, arguments, or contract violation. CLI exit code 2.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Tensor dimension mismatch. A ConfigError whose message names both shapes.
class ShapeError : public ConfigError {
  public:
    using ConfigError::ConfigError;
};

/// Malformed or internally inconsistent data files. CLI exit code 2.
class DataError : public Error {
  public:
    using Error::Error;
};

/// Filesystem failures. CLI exit code 3.
class IoError : public Error {
  public:
    using Error::Error;
};

/// Efficiency budget assertion failure. CLI exit code 4.
class BudgetError : public Error {
  public:
    using Error::Error;
};

}  // namespace gtrs
