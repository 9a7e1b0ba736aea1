#pragma once

#include <stdexcept>
#include <string>

namespace wildknot {

/// Malformed or contract-violating input (bad permutation, size mismatch, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A geometric query that cannot be answered: point outside a tube image,
/// inversion residual above tolerance, insufficient resolution.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested depth needs more precision than IEEE double provides.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wildknot
