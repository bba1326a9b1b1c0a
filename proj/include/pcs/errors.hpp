#pragma once

#include <stdexcept>
#include <string>

namespace pcs {

// Error categories map onto the CLI exit-code contract:
//   ConfigError -> 2, DataError -> 3, NumericalError -> 4.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConstantColumn : public DataError {
 public:
  explicit ConstantColumn(int column, const std::string& name = "")
      : DataError("column " + std::to_string(column) +
                  (name.empty() ? "" : " (" + name + ")") +
                  " has zero variance"),
        column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

class BadFraction : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DegenerateResponse : public DataError {
 public:
  using DataError::DataError;
};

class DimensionMismatch : public DataError {
 public:
  using DataError::DataError;
};

class BadSd : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class BadConfig : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class KTooLarge : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class EmptySurvivors : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateTruth : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace pcs
