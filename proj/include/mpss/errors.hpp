#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace mpss {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input data or topology. Carries file coordinates when known.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message, std::optional<long> line = std::nullopt,
                           std::string column = {})
      : Error(decorate(message, line, column)), line_(line), column_(std::move(column)) {}

  std::optional<long> line() const noexcept { return line_; }
  const std::string& column() const noexcept { return column_; }

 private:
  static std::string decorate(const std::string& message, std::optional<long> line,
                              const std::string& column) {
    std::string prefix;
    if (line) prefix += "line " + std::to_string(*line);
    if (!column.empty()) prefix += (prefix.empty() ? "" : ", ") + std::string("column '") + column + "'";
    return prefix.empty() ? message : prefix + ": " + message;
  }

  std::optional<long> line_;
  std::string column_;
};

class UnsupportedTopology : public ValidationError {
 public:
  explicit UnsupportedTopology(const std::string& message)
      : ValidationError("unsupported topology: " + message) {}
};

class UnknownDmu : public ValidationError {
 public:
  explicit UnknownDmu(const std::string& id) : ValidationError("unknown DMU '" + id + "'") {}
};

/// An LP that should be solvable was not (infeasible fixing band, iteration limit).
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace mpss
