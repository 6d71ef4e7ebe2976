#pragma once

#include <stdexcept>
#include <string>

namespace pocket {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or missing input files, label-mapping problems.
class DataError : public Error {
public:
  using Error::Error;
};

/// Shape or size mismatch between arguments.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Invalid configuration values (counts, rates, grids, hyperparameters).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Non-finite iterates, singular systems.
class NumericalError : public Error {
public:
  using Error::Error;
};

} // namespace pocket
