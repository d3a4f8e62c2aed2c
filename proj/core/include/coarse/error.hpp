#pragma once

#include <stdexcept>
#include <string>

namespace coarse {

/// Malformed input: unknown point ids, bad files, violated preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A component handed to a construction broke its contract (an oracle
/// returned an invalid witness, a scheme exceeded its bound, ...).
class OracleViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A group product or cone step left the finite window it was built on.
class WindowExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace coarse
