#pragma once

#include <stdexcept>
#include <string>

namespace qpm {

/// A configuration document is malformed or violates its schema.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physical quantity was requested outside the domain where it is defined
/// (wavelength outside a Sellmeier range, evanescent emission angle, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace qpm
