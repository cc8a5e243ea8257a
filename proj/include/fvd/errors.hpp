#pragma once

#include <stdexcept>
#include <string>

namespace fvd {

// Bad input data: config files, material constants, meshes.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// det F <= 0 somewhere; the stepper treats it like a failed Newton solve.
struct ElementInversion : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a run gives up after the allowed number of step halvings.
struct SolverDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fvd
