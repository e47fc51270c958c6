#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "tada/errors.hpp"
#include "tada/fft.hpp"
#include "tada/tensor.hpp"

namespace tada::gradnet {

using Var = int;

/// Train: batch statistics + dropout active (running stats updated by the
/// owning layer). Eval: running statistics, dropout off. Instance:
/// per-sample statistics like Train but dropout off and no running-stat
/// updates — inference mode for nets trained with batch-of-one stats.
enum class Mode { Train, Eval, Instance };

/// Reverse-mode tape. Nodes are appended in forward order; backward()
/// sweeps them in exact reverse order, accumulating gradients additively
/// at fan-out. One tape per forward/backward pass, confined to one thread.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var leaf(Tensor v) {
    nodes_.push_back(Node{std::move(v), Tensor{}, nullptr});
    return static_cast<Var>(nodes_.size() - 1);
  }

  const Tensor& val(Var i) const { return nodes_[static_cast<std::size_t>(i)].value; }
  Tensor& grad(Var i) { return nodes_[static_cast<std::size_t>(i)].grad; }

  void backward(Var root) {
    if (val(root).size() != 1) throw ShapeMismatch("backward root must be scalar");
    for (std::size_t i = 0; i <= static_cast<std::size_t>(root); ++i)
      nodes_[i].grad = Tensor(nodes_[i].value.shape);
    nodes_[static_cast<std::size_t>(root)].grad[0] = 1.0;
    for (int i = root; i >= 0; --i) {
      auto& n = nodes_[static_cast<std::size_t>(i)];
      if (n.backward) n.backward(*this, i);
    }
  }

  // ---- elementwise ----

  Var add(Var a, Var b) {
    require_same(a, b);
    Tensor out = val(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += val(b)[i];
    return push(std::move(out), [a, b](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      for (std::size_t i = 0; i < g.size(); ++i) {
        t.grad(a)[i] += g[i];
        t.grad(b)[i] += g[i];
      }
    });
  }

  Var sub(Var a, Var b) {
    require_same(a, b);
    Tensor out = val(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= val(b)[i];
    return push(std::move(out), [a, b](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      for (std::size_t i = 0; i < g.size(); ++i) {
        t.grad(a)[i] += g[i];
        t.grad(b)[i] -= g[i];
      }
    });
  }

  Var mul(Var a, Var b) {
    require_same(a, b);
    Tensor out = val(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= val(b)[i];
    return push(std::move(out), [a, b](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      for (std::size_t i = 0; i < g.size(); ++i) {
        t.grad(a)[i] += g[i] * t.val(b)[i];
        t.grad(b)[i] += g[i] * t.val(a)[i];
      }
    });
  }

  Var scale(Var a, double c) {
    Tensor out = val(a);
    for (double& v : out.data) v *= c;
    return push(std::move(out), [a, c](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      for (std::size_t i = 0; i < g.size(); ++i) t.grad(a)[i] += g[i] * c;
    });
  }

  Var add_const(Var a, double c) {
    Tensor out = val(a);
    for (double& v : out.data) v += c;
    return push(std::move(out), [a](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      for (std::size_t i = 0; i < g.size(); ++i) t.grad(a)[i] += g[i];
    });
  }

  Var relu(Var a) {
    Tensor out = val(a);
    for (double& v : out.data) v = v > 0.0 ? v : 0.0;
    return push(std::move(out), [a](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      for (std::size_t i = 0; i < g.size(); ++i)
        if (t.val(a)[i] > 0.0) t.grad(a)[i] += g[i];
    });
  }

  Var leaky_relu(Var a, double slope = 0.2) {
    Tensor out = val(a);
    for (double& v : out.data) v = v > 0.0 ? v : slope * v;
    return push(std::move(out), [a, slope](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      for (std::size_t i = 0; i < g.size(); ++i)
        t.grad(a)[i] += g[i] * (t.val(a)[i] > 0.0 ? 1.0 : slope);
    });
  }

  Var sigmoid(Var a) {
    Tensor out = val(a);
    for (double& v : out.data) v = 1.0 / (1.0 + std::exp(-v));
    return push(std::move(out), [a](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      const Tensor& y = t.val(self);
      for (std::size_t i = 0; i < g.size(); ++i)
        t.grad(a)[i] += g[i] * y[i] * (1.0 - y[i]);
    });
  }

  Var tanh_act(Var a) {
    Tensor out = val(a);
    for (double& v : out.data) v = std::tanh(v);
    return push(std::move(out), [a](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      const Tensor& y = t.val(self);
      for (std::size_t i = 0; i < g.size(); ++i)
        t.grad(a)[i] += g[i] * (1.0 - y[i] * y[i]);
    });
  }

  Var log_shifted(Var a, double shift) {
    Tensor out = val(a);
    for (double& v : out.data) v = std::log(v + shift);
    return push(std::move(out), [a, shift](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      for (std::size_t i = 0; i < g.size(); ++i)
        t.grad(a)[i] += g[i] / (t.val(a)[i] + shift);
    });
  }

  // ---- reductions and scalar broadcasting ----

  Var sum(Var a) {
    double s = 0.0;
    for (double v : val(a).data) s += v;
    return push(Tensor::scalar(s), [a](Tape& t, Var self) {
      const double g = t.grad(self)[0];
      for (double& d : t.grad(a).data) d += g;
    });
  }

  Var mean(Var a) {
    const double n = static_cast<double>(val(a).size());
    double s = 0.0;
    for (double v : val(a).data) s += v;
    return push(Tensor::scalar(s / n), [a, n](Tape& t, Var self) {
      const double g = t.grad(self)[0] / n;
      for (double& d : t.grad(a).data) d += g;
    });
  }

  /// Elementwise multiply by a scalar node (broadcast).
  Var mul_scalar(Var a, Var s) {
    require_scalar(s);
    Tensor out = val(a);
    const double sv = val(s)[0];
    for (double& v : out.data) v *= sv;
    return push(std::move(out), [a, s](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      const double sv = t.val(s)[0];
      double acc = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        t.grad(a)[i] += g[i] * sv;
        acc += g[i] * t.val(a)[i];
      }
      t.grad(s)[0] += acc;
    });
  }

  Var div_scalar(Var a, Var s) {
    require_scalar(s);
    Tensor out = val(a);
    const double sv = val(s)[0];
    for (double& v : out.data) v /= sv;
    return push(std::move(out), [a, s](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      const double sv = t.val(s)[0];
      double acc = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        t.grad(a)[i] += g[i] / sv;
        acc += g[i] * t.val(a)[i];
      }
      t.grad(s)[0] -= acc / (sv * sv);
    });
  }

  Var sub_scalar(Var a, Var s) {
    require_scalar(s);
    Tensor out = val(a);
    const double sv = val(s)[0];
    for (double& v : out.data) v -= sv;
    return push(std::move(out), [a, s](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      double acc = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        t.grad(a)[i] += g[i];
        acc += g[i];
      }
      t.grad(s)[0] -= acc;
    });
  }

  // ---- shape plumbing ----

  Var reshape(Var a, std::vector<std::size_t> shape) {
    if (Tensor::count(shape) != val(a).size()) throw ShapeMismatch("reshape");
    Tensor out(std::move(shape), val(a).data);
    return push(std::move(out), [a](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      for (std::size_t i = 0; i < g.size(); ++i) t.grad(a)[i] += g[i];
    });
  }

  /// Flat 1-D concatenation.
  Var concat(Var a, Var b) {
    Tensor out({val(a).size() + val(b).size()});
    std::copy(val(a).data.begin(), val(a).data.end(), out.data.begin());
    std::copy(val(b).data.begin(), val(b).data.end(),
              out.data.begin() + static_cast<long>(val(a).size()));
    return push(std::move(out), [a, b](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      const std::size_t na = t.val(a).size();
      for (std::size_t i = 0; i < na; ++i) t.grad(a)[i] += g[i];
      for (std::size_t i = 0; i < t.val(b).size(); ++i) t.grad(b)[i] += g[na + i];
    });
  }

  /// Flat slice [offset, offset+len).
  Var slice(Var a, std::size_t offset, std::size_t len) {
    if (offset + len > val(a).size()) throw ShapeMismatch("slice out of range");
    Tensor out({len});
    std::copy(val(a).data.begin() + static_cast<long>(offset),
              val(a).data.begin() + static_cast<long>(offset + len), out.data.begin());
    return push(std::move(out), [a, offset, len](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      for (std::size_t i = 0; i < len; ++i) t.grad(a)[offset + i] += g[i];
    });
  }

  /// Stacks equal-length 1-D rows into [L, H].
  Var stack_rows(const std::vector<Var>& rows) {
    if (rows.empty()) throw ShapeMismatch("stack_rows: empty");
    const std::size_t h = val(rows[0]).size();
    Tensor out({rows.size(), h});
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (val(rows[r]).size() != h) throw ShapeMismatch("stack_rows: ragged");
      std::copy(val(rows[r]).data.begin(), val(rows[r]).data.end(),
                out.data.begin() + static_cast<long>(r * h));
    }
    return push(std::move(out), [rows, h](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t i = 0; i < h; ++i) t.grad(rows[r])[i] += g[r * h + i];
    });
  }

  // ---- network primitives ----

  /// Same-length 1-D cross-correlation with zero padding. Input [Cin, L],
  /// kernels [Cout, Cin, K] (K odd), bias [Cout] -> [Cout, L].
  Var conv1d(Var x, Var k, Var b) {
    const Tensor& xv = val(x);
    const Tensor& kv = val(k);
    const Tensor& bv = val(b);
    if (xv.shape.size() != 2 || kv.shape.size() != 3 || bv.shape.size() != 1)
      throw ShapeMismatch("conv1d ranks");
    const std::size_t cin = xv.shape[0], len = xv.shape[1];
    const std::size_t cout = kv.shape[0], kk = kv.shape[2];
    if (kv.shape[1] != cin || bv.shape[0] != cout || kk % 2 == 0)
      throw ShapeMismatch("conv1d shapes");
    const long pad = static_cast<long>(kk - 1) / 2;
    Tensor out({cout, len});
    for (std::size_t o = 0; o < cout; ++o) {
      for (std::size_t i = 0; i < len; ++i) {
        double acc = bv[o];
        for (std::size_t c = 0; c < cin; ++c) {
          const double* xr = &xv.data[c * len];
          const double* kr = &kv.data[(o * cin + c) * kk];
          for (std::size_t t = 0; t < kk; ++t) {
            const long j = static_cast<long>(i) + static_cast<long>(t) - pad;
            if (j >= 0 && j < static_cast<long>(len)) acc += xr[j] * kr[t];
          }
        }
        out.data[o * len + i] = acc;
      }
    }
    return push(std::move(out), [x, k, b, cin, cout, len, kk, pad](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      const Tensor& xv = t.val(x);
      const Tensor& kv = t.val(k);
      Tensor& gx = t.grad(x);
      Tensor& gk = t.grad(k);
      Tensor& gb = t.grad(b);
      for (std::size_t o = 0; o < cout; ++o) {
        double bacc = 0.0;
        for (std::size_t i = 0; i < len; ++i) bacc += g[o * len + i];
        gb[o] += bacc;
        for (std::size_t c = 0; c < cin; ++c) {
          const double* xr = &xv.data[c * len];
          const double* kr = &kv.data[(o * cin + c) * kk];
          double* gxr = &gx.data[c * len];
          double* gkr = &gk.data[(o * cin + c) * kk];
          for (std::size_t i = 0; i < len; ++i) {
            const double gi = g[o * len + i];
            if (gi == 0.0) continue;
            for (std::size_t tt = 0; tt < kk; ++tt) {
              const long j = static_cast<long>(i) + static_cast<long>(tt) - pad;
              if (j >= 0 && j < static_cast<long>(len)) {
                gxr[j] += gi * kr[tt];
                gkr[tt] += gi * xr[j];
              }
            }
          }
        }
      }
    });
  }

  /// Affine map: x [N], W [M, N], b [M] -> [M].
  Var dense(Var x, Var w, Var b) {
    const Tensor& xv = val(x);
    const Tensor& wv = val(w);
    const Tensor& bv = val(b);
    if (wv.shape.size() != 2 || bv.shape.size() != 1) throw ShapeMismatch("dense ranks");
    const std::size_t m = wv.shape[0], n = wv.shape[1];
    if (xv.size() != n || bv.shape[0] != m) throw ShapeMismatch("dense shapes");
    Tensor out({m});
    for (std::size_t r = 0; r < m; ++r) {
      double acc = bv[r];
      const double* wr = &wv.data[r * n];
      for (std::size_t c = 0; c < n; ++c) acc += wr[c] * xv.data[c];
      out[r] = acc;
    }
    return push(std::move(out), [x, w, b, m, n](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      const Tensor& xv = t.val(x);
      const Tensor& wv = t.val(w);
      Tensor& gx = t.grad(x);
      Tensor& gw = t.grad(w);
      Tensor& gb = t.grad(b);
      for (std::size_t r = 0; r < m; ++r) {
        const double gr = g[r];
        gb[r] += gr;
        const double* wr = &wv.data[r * n];
        double* gwr = &gw.data[r * n];
        for (std::size_t c = 0; c < n; ++c) {
          gx.data[c] += gr * wr[c];
          gwr[c] += gr * xv.data[c];
        }
      }
    });
  }

  /// Non-overlapping pairwise max over [C, L] -> [C, L/2].
  /// Ties route gradient to the earlier index.
  Var maxpool2(Var x) {
    const Tensor& xv = val(x);
    if (xv.shape.size() != 2) throw ShapeMismatch("maxpool2 rank");
    const std::size_t c = xv.shape[0], len = xv.shape[1];
    if (len % 2 != 0) throw OddLength("maxpool2: odd length");
    Tensor out({c, len / 2});
    auto arg = std::make_shared<std::vector<std::size_t>>(out.size());
    for (std::size_t ch = 0; ch < c; ++ch) {
      for (std::size_t i = 0; i < len / 2; ++i) {
        const std::size_t j0 = ch * len + 2 * i;
        const bool first = xv.data[j0] >= xv.data[j0 + 1];
        out.data[ch * (len / 2) + i] = first ? xv.data[j0] : xv.data[j0 + 1];
        (*arg)[ch * (len / 2) + i] = first ? j0 : j0 + 1;
      }
    }
    return push(std::move(out), [x, arg](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      for (std::size_t i = 0; i < g.size(); ++i) t.grad(x)[(*arg)[i]] += g[i];
    });
  }

  /// Nearest-neighbor duplication: [C, L] -> [C, 2L].
  Var upsample2(Var x) {
    const Tensor& xv = val(x);
    if (xv.shape.size() != 2) throw ShapeMismatch("upsample2 rank");
    const std::size_t c = xv.shape[0], len = xv.shape[1];
    Tensor out({c, 2 * len});
    for (std::size_t ch = 0; ch < c; ++ch)
      for (std::size_t i = 0; i < len; ++i) {
        out.data[ch * 2 * len + 2 * i] = xv.data[ch * len + i];
        out.data[ch * 2 * len + 2 * i + 1] = xv.data[ch * len + i];
      }
    return push(std::move(out), [x, c, len](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      for (std::size_t ch = 0; ch < c; ++ch)
        for (std::size_t i = 0; i < len; ++i)
          t.grad(x)[ch * len + i] +=
              g[ch * 2 * len + 2 * i] + g[ch * 2 * len + 2 * i + 1];
    });
  }

  /// Per-channel batch normalization over the position axis of [C, L].
  /// Train mode uses batch statistics and reports them through the out
  /// parameters; Eval mode uses the supplied running statistics.
  Var batchnorm1d(Var x, Var gamma, Var beta, Mode mode,
                  const std::vector<double>& running_mean,
                  const std::vector<double>& running_var,
                  std::vector<double>* batch_mean = nullptr,
                  std::vector<double>* batch_var = nullptr, double eps = 1e-5) {
    const Tensor& xv = val(x);
    if (xv.shape.size() != 2) throw ShapeMismatch("batchnorm1d rank");
    const std::size_t c = xv.shape[0], len = xv.shape[1];
    if (val(gamma).size() != c || val(beta).size() != c)
      throw ShapeMismatch("batchnorm1d params");
    if (mode != Mode::Eval && len < 2) throw DegenerateBatch();
    auto mu = std::make_shared<std::vector<double>>(c);
    auto istd = std::make_shared<std::vector<double>>(c);
    if (mode != Mode::Eval) {
      for (std::size_t ch = 0; ch < c; ++ch) {
        double m = 0.0;
        for (std::size_t i = 0; i < len; ++i) m += xv.data[ch * len + i];
        m /= static_cast<double>(len);
        double v = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
          const double d = xv.data[ch * len + i] - m;
          v += d * d;
        }
        v /= static_cast<double>(len);
        (*mu)[ch] = m;
        (*istd)[ch] = 1.0 / std::sqrt(v + eps);
        if (batch_mean) (*batch_mean)[ch] = m;
        if (batch_var) (*batch_var)[ch] = v;
      }
    } else {
      if (running_mean.size() != c || running_var.size() != c)
        throw ShapeMismatch("batchnorm1d running stats");
      for (std::size_t ch = 0; ch < c; ++ch) {
        (*mu)[ch] = running_mean[ch];
        (*istd)[ch] = 1.0 / std::sqrt(running_var[ch] + eps);
      }
    }
    Tensor out({c, len});
    for (std::size_t ch = 0; ch < c; ++ch) {
      const double g = val(gamma)[ch], bt = val(beta)[ch];
      for (std::size_t i = 0; i < len; ++i)
        out.data[ch * len + i] =
            g * (xv.data[ch * len + i] - (*mu)[ch]) * (*istd)[ch] + bt;
    }
    const bool train = mode != Mode::Eval;
    return push(std::move(out), [x, gamma, beta, c, len, mu, istd, train](Tape& t,
                                                                          Var self) {
      const Tensor& g = t.grad(self);
      const Tensor& xv = t.val(x);
      for (std::size_t ch = 0; ch < c; ++ch) {
        const double gam = t.val(gamma)[ch];
        const double is = (*istd)[ch];
        double gsum = 0.0, gxhat = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
          const double xh = (xv.data[ch * len + i] - (*mu)[ch]) * is;
          const double gi = g[ch * len + i];
          gsum += gi;
          gxhat += gi * xh;
        }
        t.grad(beta)[ch] += gsum;
        t.grad(gamma)[ch] += gxhat;
        if (train) {
          const double n = static_cast<double>(len);
          for (std::size_t i = 0; i < len; ++i) {
            const double xh = (xv.data[ch * len + i] - (*mu)[ch]) * is;
            t.grad(x)[ch * len + i] +=
                gam * is * (g[ch * len + i] - gsum / n - xh * gxhat / n);
          }
        } else {
          for (std::size_t i = 0; i < len; ++i)
            t.grad(x)[ch * len + i] += gam * is * g[ch * len + i];
        }
      }
    });
  }

  /// Inverted dropout. Train: zero with probability p, scale survivors
  /// by 1/(1-p); Eval: identity.
  Var dropout(Var x, double p, Mode mode, std::mt19937_64& rng) {
    if (!(p >= 0.0 && p < 1.0)) throw InvalidProbability();
    if (mode != Mode::Train || p == 0.0) {
      Tensor out = val(x);
      return push(std::move(out), [x](Tape& t, Var self) {
        const Tensor& g = t.grad(self);
        for (std::size_t i = 0; i < g.size(); ++i) t.grad(x)[i] += g[i];
      });
    }
    auto mask = std::make_shared<std::vector<double>>(val(x).size());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double inv = 1.0 / (1.0 - p);
    Tensor out = val(x);
    for (std::size_t i = 0; i < out.size(); ++i) {
      (*mask)[i] = u(rng) < p ? 0.0 : inv;
      out[i] *= (*mask)[i];
    }
    return push(std::move(out), [x, mask](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      for (std::size_t i = 0; i < g.size(); ++i) t.grad(x)[i] += g[i] * (*mask)[i];
    });
  }

  /// Squared DFT magnitudes of a real 1-D input, DC..Nyquist.
  Var power_spectrum(Var x) {
    const Tensor& xv = val(x);
    const std::size_t n = xv.size();
    if (!tada::detail::is_power_of_two(n)) throw NonPowerOfTwoLength();
    auto spec = std::make_shared<std::vector<std::complex<double>>>(n);
    for (std::size_t i = 0; i < n; ++i) (*spec)[i] = {xv.data[i], 0.0};
    tada::detail::fft_radix2(*spec);
    Tensor out({n / 2 + 1});
    for (std::size_t k = 0; k <= n / 2; ++k) out[k] = std::norm((*spec)[k]);
    return push(std::move(out), [x, spec, n](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      // dL/dx = Re(IDFT-style sum of 2*gP_k*X_k), built from the cached
      // spectrum with conjugate-symmetric extension.
      std::vector<std::complex<double>> u(n);
      u[0] = 2.0 * g[0] * (*spec)[0];
      u[n / 2] = 2.0 * g[n / 2] * (*spec)[n / 2];
      for (std::size_t k = 1; k < n / 2; ++k) {
        u[k] = g[k] * (*spec)[k];
        u[n - k] = std::conj(u[k]);
      }
      // Sum_k u_k e^{+i 2pi k j / N} = conj(FFT(conj(u)))_j.
      for (auto& z : u) z = std::conj(z);
      tada::detail::fft_radix2(u);
      for (std::size_t j = 0; j < n; ++j) t.grad(x)[j] += u[j].real();
    });
  }

  /// Population Pearson correlation between two equal-length 1-D nodes.
  /// Zero variance on either side yields value 0 with zero gradient.
  Var pearson(Var a, Var b) {
    require_same(a, b);
    const Tensor& av = val(a);
    const Tensor& bv = val(b);
    const std::size_t n = av.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ma += av[i];
      mb += bv[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double da = av[i] - ma, db = bv[i] - mb;
      sab += da * db;
      saa += da * da;
      sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return push(Tensor::scalar(0.0), nullptr);
    const double cc = sab / std::sqrt(saa * sbb);
    return push(Tensor::scalar(cc),
                [a, b, ma, mb, sab, saa, sbb, n](Tape& t, Var self) {
                  const double g = t.grad(self)[0];
                  const Tensor& av = t.val(a);
                  const Tensor& bv = t.val(b);
                  const double denom = std::sqrt(saa * sbb);
                  for (std::size_t i = 0; i < n; ++i) {
                    const double da = av[i] - ma, db = bv[i] - mb;
                    t.grad(a)[i] += g * (db - da * sab / saa) / denom;
                    t.grad(b)[i] += g * (da - db * sab / sbb) / denom;
                  }
                });
  }

  /// Binary cross-entropy against a fixed label; prediction clamped to
  /// [1e-7, 1-1e-7].
  Var bce(Var pred, double label) {
    require_scalar(pred);
    const double lo = 1e-7, hi = 1.0 - 1e-7;
    const double p = std::clamp(val(pred)[0], lo, hi);
    const double loss = -(label * std::log(p) + (1.0 - label) * std::log(1.0 - p));
    return push(Tensor::scalar(loss), [pred, label, lo, hi](Tape& t, Var self) {
      const double raw = t.val(pred)[0];
      if (raw < lo || raw > hi) return;  // clamped region: no gradient
      const double g = t.grad(self)[0];
      t.grad(pred)[0] += g * (raw - label) / (raw * (1.0 - raw));
    });
  }

  /// Softmax cross-entropy of logits [C] against a class index.
  Var cross_entropy(Var logits, std::size_t cls) {
    const Tensor& lv = val(logits);
    const std::size_t c = lv.size();
    if (cls >= c) throw ShapeMismatch("cross_entropy class index");
    double mx = lv[0];
    for (double v : lv.data) mx = std::max(mx, v);
    double z = 0.0;
    for (double v : lv.data) z += std::exp(v - mx);
    auto probs = std::make_shared<std::vector<double>>(c);
    for (std::size_t i = 0; i < c; ++i) (*probs)[i] = std::exp(lv[i] - mx) / z;
    const double loss = -std::log((*probs)[cls]);
    return push(Tensor::scalar(loss), [logits, cls, probs, c](Tape& t, Var self) {
      const double g = t.grad(self)[0];
      for (std::size_t i = 0; i < c; ++i)
        t.grad(logits)[i] += g * ((*probs)[i] - (i == cls ? 1.0 : 0.0));
    });
  }

  Var softmax(Var logits) {
    const Tensor& lv = val(logits);
    const std::size_t c = lv.size();
    double mx = lv[0];
    for (double v : lv.data) mx = std::max(mx, v);
    double z = 0.0;
    for (double v : lv.data) z += std::exp(v - mx);
    Tensor out = lv;
    for (double& v : out.data) v = std::exp(v - mx) / z;
    return push(std::move(out), [logits, c](Tape& t, Var self) {
      const Tensor& g = t.grad(self);
      const Tensor& y = t.val(self);
      double dot = 0.0;
      for (std::size_t i = 0; i < c; ++i) dot += g[i] * y[i];
      for (std::size_t i = 0; i < c; ++i) t.grad(logits)[i] += y[i] * (g[i] - dot);
    });
  }

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::function<void(Tape&, Var)> backward;
  };

  Var push(Tensor value, std::function<void(Tape&, Var)> back) {
    nodes_.push_back(Node{std::move(value), Tensor{}, std::move(back)});
    return static_cast<Var>(nodes_.size() - 1);
  }

  void require_same(Var a, Var b) const {
    if (!val(a).same_shape(val(b))) throw ShapeMismatch("elementwise shape mismatch");
  }

  void require_scalar(Var s) const {
    if (val(s).size() != 1) throw ShapeMismatch("expected scalar node");
  }

  std::vector<Node> nodes_;
};

}  // namespace tada::gradnet
