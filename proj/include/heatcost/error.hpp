#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace heatcost {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A feed row that could not be parsed. `row` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& reason)
      : Error("row " + std::to_string(row) + ": " + reason), row_(row), reason_(reason) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t row_;
  std::string reason_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An input value outside its domain; `field` names the offending parameter.
class InvalidArgument : public Error {
 public:
  InvalidArgument(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Raised when a price cannot be resolved (no quotes, or none before a date).
class NoDataError : public Error {
 public:
  using Error::Error;
};

class FetchError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace heatcost
