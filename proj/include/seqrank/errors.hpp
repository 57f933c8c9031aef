#pragma once

#include <stdexcept>
#include <string>

namespace seqrank {

// Raised when a factorization fails, a solver diverges, or a quantity is
// undefined for the given input (zero matrix, degenerate gap, rank loss).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape or argument contract violated by the caller.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace seqrank
