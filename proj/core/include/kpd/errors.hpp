#pragma once

#include <stdexcept>
#include <string>

namespace kpd {

// Bad wiring between marks, registered families and filtration kinds.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A point set with coinciding positions; all downstream code assumes
// pairwise distinct positions.
struct simplicity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by the complex builder when the simplex budget is exhausted.
struct budget_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kpd
