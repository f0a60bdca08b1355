#pragma once

#include <cstdint>
#include <string>

#include "affkit/errors.hpp"

namespace affkit {

/// Resource limits for the enumerative core. All limits are explicit
/// configuration; exceeding one raises limit_error instead of truncating.
struct Limits {
  /// Largest carrier that may be materialized (powers, free algebras,
  /// subuniverse closures).
  std::uint64_t max_enumeration = 4096;

  /// Budget for exhaustive verification loops (hom checks, congruence
  /// compatibility), measured in table lookups.
  std::uint64_t max_check_ops = std::uint64_t{1} << 33;

  void require_enumeration(std::uint64_t n, const std::string& what) const {
    if (n > max_enumeration) {
      throw limit_error(what + ": " + std::to_string(n) +
                        " elements exceeds enumeration limit " +
                        std::to_string(max_enumeration));
    }
  }

  void require_check_ops(std::uint64_t n, const std::string& what) const {
    if (n > max_check_ops) {
      throw limit_error(what + ": " + std::to_string(n) +
                        " verification steps exceed budget " +
                        std::to_string(max_check_ops));
    }
  }
};

}  // namespace affkit
