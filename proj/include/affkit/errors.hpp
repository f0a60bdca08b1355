#pragma once

#include <stdexcept>
#include <string>

namespace affkit {

/// Raised when an enumeration would exceed the configured resource limits.
/// Callers get a refusal, never a silently truncated answer.
class limit_error : public std::runtime_error {
 public:
  explicit limit_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on malformed input files or ill-formed in-memory objects
/// (table entries out of range, arity mismatches, duplicate names, ...).
class schema_error : public std::runtime_error {
 public:
  explicit schema_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a quantity that is guaranteed by a theorem fails its check.
/// Seeing this exception on valid affine input means the implementation is
/// wrong, which is exactly what the check is for.
class invariant_error : public std::runtime_error {
 public:
  explicit invariant_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace affkit
