#pragma once

#include <stdexcept>
#include <string>

namespace exlimit {

/// An input object violates one of its documented invariants.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its contract (wrong regime, too few
/// samples, ...). Distinct from validation_error so callers can tell a
/// malformed object from a misused API.
class precondition_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A simulation request exceeds what this process can allocate.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace exlimit
