#pragma once

#include <cstdint>
#include <string>

#include "brgcl/matrix.hpp"
#include "brgcl/rng.hpp"

namespace brgcl {

/// A trainable weight matrix paired with its gradient accumulator.
struct Param {
  Matrix value;
  Matrix grad;

  Param() = default;
  Param(std::size_t rows, std::size_t cols) : value(rows, cols), grad(rows, cols) {}

  void zero_grad() { grad.zero(); }

  /// Glorot-uniform initialization in [-limit, limit], limit = sqrt(6/(fan_in+fan_out)).
  void glorot_init(Rng& rng);
};

/// Adam optimizer state for one parameter.
struct AdamState {
  Matrix m;
  Matrix v;
  std::size_t step = 0;
  real_t lr = real_t(1e-3);
  real_t beta1 = real_t(0.9);
  real_t beta2 = real_t(0.999);
  real_t eps = real_t(1e-8);

  AdamState() = default;
  AdamState(std::size_t rows, std::size_t cols, real_t learning_rate = real_t(1e-3))
      : m(rows, cols), v(rows, cols), lr(learning_rate) {}
};

/// One bias-corrected Adam update. The gradient is left untouched; the caller
/// zeroes it. Throws NumericError naming `name` on a non-finite gradient.
void adam_step(Param& param, AdamState& state, const std::string& name = "param");

}  // namespace brgcl
