#pragma once

#include <stdexcept>
#include <string>

namespace pforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (e.g. t <= alpha).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A proposed slope fails the global-underestimator probe.
class NotASubgradient : public Error {
 public:
  using Error::Error;
};

class EmptySample : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// Exact beta-expansion arithmetic outgrew the configured bit budget.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its node, memory or wall-clock cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A segment handed to gamma_locate is not in the language of any Z_gamma.
class NotInZ : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration; `field` names the offending JSON key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace pforge
