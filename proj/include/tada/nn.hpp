#pragma once

#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tada/tape.hpp"
#include "tada/tensor.hpp"

namespace tada::gradnet {

/// A parameter tensor bound into the current tape; lets trainers read
/// gradients back after the reverse sweep.
struct ParamBinding {
  Tensor* tensor;
  Var var;
};

using Bindings = std::vector<ParamBinding>;

namespace init {

inline void kaiming_uniform(Tensor& w, std::size_t fan_in, std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
  std::uniform_real_distribution<double> u(-bound, bound);
  for (double& v : w.data) v = u(rng);
}

inline void xavier_uniform(Tensor& w, std::size_t fan_in, std::size_t fan_out,
                           std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> u(-bound, bound);
  for (double& v : w.data) v = u(rng);
}

}  // namespace init

enum class InitKind { Kaiming, Xavier };

namespace detail {

inline Var bind(Tape& t, Tensor& param, Bindings* binds) {
  const Var v = t.leaf(param);
  if (binds) binds->push_back({&param, v});
  return v;
}

}  // namespace detail

struct Conv1dLayer {
  Tensor w;  // [Cout, Cin, K]
  Tensor b;  // [Cout]

  Conv1dLayer() = default;
  Conv1dLayer(std::size_t cout, std::size_t cin, std::size_t k, InitKind kind,
              std::mt19937_64& rng)
      : w({cout, cin, k}), b({cout}) {
    const std::size_t fan_in = cin * k;
    if (kind == InitKind::Kaiming)
      init::kaiming_uniform(w, fan_in, rng);
    else
      init::xavier_uniform(w, fan_in, cout * k, rng);
  }

  Var forward(Tape& t, Var x, Bindings* binds = nullptr) {
    return t.conv1d(x, detail::bind(t, w, binds), detail::bind(t, b, binds));
  }

  std::size_t param_count() const { return w.size() + b.size(); }
};

struct DenseLayer {
  Tensor w;  // [M, N]
  Tensor b;  // [M]

  DenseLayer() = default;
  DenseLayer(std::size_t m, std::size_t n, InitKind kind, std::mt19937_64& rng)
      : w({m, n}), b({m}) {
    if (kind == InitKind::Kaiming)
      init::kaiming_uniform(w, n, rng);
    else
      init::xavier_uniform(w, n, m, rng);
  }

  Var forward(Tape& t, Var x, Bindings* binds = nullptr) {
    return t.dense(x, detail::bind(t, w, binds), detail::bind(t, b, binds));
  }

  std::size_t param_count() const { return w.size() + b.size(); }
};

struct BatchNorm1dLayer {
  Tensor gamma;  // [C]
  Tensor beta;   // [C]
  std::vector<double> run_mean;
  std::vector<double> run_var;
  double momentum = 0.9;

  BatchNorm1dLayer() = default;
  explicit BatchNorm1dLayer(std::size_t c)
      : gamma({c}), beta({c}), run_mean(c, 0.0), run_var(c, 1.0) {
    for (double& v : gamma.data) v = 1.0;
  }

  Var forward(Tape& t, Var x, Mode mode, Bindings* binds = nullptr) {
    const std::size_t c = gamma.size();
    std::vector<double> bm(c), bv(c);
    const Var out =
        t.batchnorm1d(x, detail::bind(t, gamma, binds), detail::bind(t, beta, binds),
                      mode, run_mean, run_var, &bm, &bv);
    if (mode == Mode::Train) {
      for (std::size_t i = 0; i < c; ++i) {
        run_mean[i] = momentum * run_mean[i] + (1.0 - momentum) * bm[i];
        run_var[i] = momentum * run_var[i] + (1.0 - momentum) * bv[i];
      }
    }
    return out;
  }

  std::size_t param_count() const { return gamma.size() + beta.size(); }
};

/// Standard LSTM over a [L, D] sequence; returns the full [L, H] hidden
/// sequence. Gate layout in the fused weight matrix is i, f, g, o.
/// Forget-gate bias initialized to 1, zero initial state.
struct LstmLayer {
  Tensor w;  // [4H, D+H]
  Tensor b;  // [4H]
  std::size_t input = 0;
  std::size_t hidden = 0;

  LstmLayer() = default;
  LstmLayer(std::size_t d, std::size_t h, std::mt19937_64& rng)
      : w({4 * h, d + h}), b({4 * h}), input(d), hidden(h) {
    init::xavier_uniform(w, d + h, 4 * h, rng);
    for (std::size_t i = h; i < 2 * h; ++i) b[i] = 1.0;  // forget bias
  }

  Var forward(Tape& t, Var seq, Bindings* binds = nullptr) {
    const auto& shape = t.val(seq).shape;
    if (shape.size() != 2 || shape[1] != input) throw ShapeMismatch("lstm input");
    const std::size_t steps = shape[0];
    const std::size_t h = hidden;
    const Var wv = detail::bind(t, w, binds);
    const Var bv = detail::bind(t, b, binds);
    Var hprev = t.leaf(Tensor({h}));
    Var cprev = t.leaf(Tensor({h}));
    std::vector<Var> outputs;
    outputs.reserve(steps);
    for (std::size_t s = 0; s < steps; ++s) {
      const Var xt = t.slice(seq, s * input, input);
      const Var hx = t.concat(xt, hprev);
      const Var gates = t.dense(hx, wv, bv);
      const Var ig = t.sigmoid(t.slice(gates, 0, h));
      const Var fg = t.sigmoid(t.slice(gates, h, h));
      const Var gg = t.tanh_act(t.slice(gates, 2 * h, h));
      const Var og = t.sigmoid(t.slice(gates, 3 * h, h));
      cprev = t.add(t.mul(fg, cprev), t.mul(ig, gg));
      hprev = t.mul(og, t.tanh_act(cprev));
      outputs.push_back(hprev);
    }
    return t.stack_rows(outputs);
  }

  std::size_t param_count() const { return w.size() + b.size(); }
};

}  // namespace tada::gradnet
