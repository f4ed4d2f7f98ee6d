#pragma once

#include <stdexcept>
#include <string>

namespace dssyk {

/// Violated precondition (out-of-range parameter, bad shape, cap exceeded).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative or truncated numeric procedure failed to settle.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two routes that must agree produced different results.
class Inconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dssyk
