#pragma once

#include <stdexcept>
#include <string>

namespace pbdpp {

// Model dispersion is outside the two supported cases, or the requested n
// violates the Case-2 validity range. The CLI maps this to its own exit code.
struct OutOfScopeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An exact computation was requested for a model family that only supports
// Monte Carlo estimation.
struct UnsupportedExactError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace pbdpp
