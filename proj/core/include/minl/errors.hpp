#pragma once

#include <stdexcept>
#include <string>

namespace minl {

/// A value violates a documented invariant (trace, positivity, Hermiticity,
/// normalization). The message names the invariant and the measured violation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands have incompatible shapes or the wrong number of subsystems.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace minl
