#pragma once

#include <stdexcept>
#include <string>

namespace symjac {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure failed (non-convergence, truncation cap, NaN).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent or invalid configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace symjac
