#pragma once

#include <cmath>

#include "tada/errors.hpp"
#include "tada/tensor.hpp"

namespace tada::gradnet {

struct AdamState {
  Tensor m;
  Tensor v;
  long t = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Standard bias-corrected Adam update, in place.
inline void adam_step(Tensor& params, const Tensor& grads, AdamState& state) {
  if (!params.same_shape(grads)) throw ShapeMismatch("adam_step shapes");
  if (state.m.size() == 0) {
    state.m = Tensor(params.shape);
    state.v = Tensor(params.shape);
  }
  if (!state.m.same_shape(params)) throw ShapeMismatch("adam_step state shapes");
  state.t += 1;
  const double b1t = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double b2t = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grads[i];
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grads[i] * grads[i];
    const double mhat = state.m[i] / b1t;
    const double vhat = state.v[i] / b2t;
    params[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

}  // namespace tada::gradnet
