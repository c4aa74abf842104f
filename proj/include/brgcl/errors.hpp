#pragma once

#include <stdexcept>
#include <string>

namespace brgcl {

/// Shape incompatibility between operands; message names the kernel and both shapes.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite values or numerically invalid state.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dataset or checkpoint files missing, malformed, or inconsistent.
struct LoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration (file or flags).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace brgcl
