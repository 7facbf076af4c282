#pragma once

#include <stdexcept>
#include <string>

namespace gev {

// Base for all library errors. `code` is a short machine-readable tag.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error("domain_error", message) {}
  DomainError(std::string code, const std::string& message) : Error(std::move(code), message) {}
};

// Iterative solver failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& message)
      : Error("convergence_error", message) {}
};

// Invalid user configuration (CLI flags, config file, input files).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("config_error", message) {}
  ConfigError(std::string code, const std::string& message) : Error(std::move(code), message) {}
};

// A computation finished but its measured quality is below contract.
class QualityError : public Error {
 public:
  explicit QualityError(const std::string& message) : Error("quality_error", message) {}
};

}  // namespace gev
