#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace tpi {

/// Base class for every error raised by the simulator. `kind()` is a stable,
/// machine-readable tag used by the CLI error line.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

class NormalizationError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "NormalizationError"; }
};

/// Quadrature did not reach its tolerance. Carries the error estimate and,
/// for batch evaluations, the offending cell.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double error_estimate,
                   std::optional<std::size_t> row = std::nullopt,
                   std::optional<std::size_t> col = std::nullopt)
      : Error(what), error_estimate_(error_estimate), row_(row), col_(col) {}

  const char* kind() const noexcept override { return "IntegrationError"; }
  double error_estimate() const noexcept { return error_estimate_; }
  std::optional<std::size_t> row() const noexcept { return row_; }
  std::optional<std::size_t> col() const noexcept { return col_; }

 private:
  double error_estimate_;
  std::optional<std::size_t> row_;
  std::optional<std::size_t> col_;
};

class InsufficientSampling : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "InsufficientSampling"; }
};

/// Malformed configuration text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::string key = {})
      : Error(what), line_(line), key_(std::move(key)) {}
  const char* kind() const noexcept override { return "ParseError"; }
  std::size_t line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

/// Well-formed configuration that violates an invariant.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::string key = {})
      : Error(what), key_(std::move(key)) {}
  const char* kind() const noexcept override { return "ValidationError"; }
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace tpi
