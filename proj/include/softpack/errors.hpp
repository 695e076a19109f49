#pragma once

#include <stdexcept>
#include <string>

namespace softpack {

/// Bad user input: malformed files, out-of-range parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A geometric precondition of an operation does not hold.
class ConstraintViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class MalformedRegion : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative method failed to reach its tolerance.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace softpack
