#include "brgcl/param.hpp"

#include <cmath>

namespace brgcl {

void Param::glorot_init(Rng& rng) {
  double limit = std::sqrt(6.0 / static_cast<double>(value.rows + value.cols));
  for (real_t& w : value.data) w = static_cast<real_t>(rng.uniform(-limit, limit));
}

void adam_step(Param& param, AdamState& state, const std::string& name) {
  if (!param.value.same_shape(param.grad) || !param.value.same_shape(state.m) ||
      !param.value.same_shape(state.v)) {
    throw DimensionError("adam_step(" + name + "): dimension mismatch (" +
                         param.value.shape_str() + " vs " + param.grad.shape_str() + ")");
  }
  if (!all_finite(param.grad)) {
    throw NumericError("adam_step(" + name + "): non-finite gradient");
  }
  state.step += 1;
  real_t bc1 = real_t(1) - static_cast<real_t>(std::pow(state.beta1, state.step));
  real_t bc2 = real_t(1) - static_cast<real_t>(std::pow(state.beta2, state.step));
  for (std::size_t i = 0; i < param.value.size(); ++i) {
    real_t g = param.grad.data[i];
    state.m.data[i] = state.beta1 * state.m.data[i] + (real_t(1) - state.beta1) * g;
    state.v.data[i] = state.beta2 * state.v.data[i] + (real_t(1) - state.beta2) * g * g;
    real_t mhat = state.m.data[i] / bc1;
    real_t vhat = state.v.data[i] / bc2;
    param.value.data[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

}  // namespace brgcl
