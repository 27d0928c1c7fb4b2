#pragma once

#include <stdexcept>
#include <string>

namespace qcomp {

/// Bad caller input: out-of-range parameter, dimension mismatch, and so on.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical invariant that must hold for valid inputs was violated
/// (non-unitary network, probability far outside [0,1], negative eigenvalue).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

inline void ensure(bool cond, const std::string& what) {
  if (!cond) throw InvariantViolation(what);
}

}  // namespace detail
}  // namespace qcomp
