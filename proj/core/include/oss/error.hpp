#pragma once

#include <stdexcept>
#include <string>

namespace oss {

/// Malformed instance or solution document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A well-formed document that violates a model invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive computation refused because it would exceed an enumeration guard.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace oss

#define OSS_EXPECTS(cond, msg)                   \
  do {                                           \
    if (!(cond)) throw ::oss::ContractViolation(msg); \
  } while (false)
