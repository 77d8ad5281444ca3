#pragma once

#include <stdexcept>
#include <string>

namespace sssi {

/// A parameter lies outside the domain where the requested object exists.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A requested time or key is not present (no interpolation is attempted).
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A numerical procedure detected divergence or could not certify a value.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation not defined for the given family or flow.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sssi
