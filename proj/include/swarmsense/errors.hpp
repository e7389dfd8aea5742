#pragma once

#include <stdexcept>

namespace swarmsense {

// Invalid configuration, parameters or input files.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Plan generation could not satisfy its constraints within its retry budget.
struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numeric precondition was violated (zero-vector scaling, infeasible
// calibration, oversized enumeration).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace swarmsense
