#pragma once

#include <stdexcept>
#include <string>

namespace srtlab {

/// Malformed configuration or out-of-range parameters supplied by a caller.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A constructed object failed one of its validated invariants.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A certified error bound exceeded the tolerance the caller asked for.
class ToleranceError : public InvariantError {
 public:
  ToleranceError(const std::string& what, double bound)
      : InvariantError(what), bound_(bound) {}
  double bound() const noexcept { return bound_; }

 private:
  double bound_;
};

/// The requested computation exceeds the declared resource budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its domain (x < 1, rho*x < 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace srtlab
