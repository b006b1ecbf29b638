#pragma once

#include <stdexcept>
#include <string>

namespace pdpp {

// Bad user-supplied configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or unusable input data (CLI exit code 3).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure: non-convergent quadrature, rejection cap hit, etc.
// (CLI exit code 4.)
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pdpp
