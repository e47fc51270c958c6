#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tada/nn.hpp"
#include "tada/segment.hpp"
#include "tada/tape.hpp"
#include "tada/weights.hpp"

namespace tada::models {

using gradnet::Bindings;
using gradnet::Mode;
using gradnet::NamedTensor;
using gradnet::Tape;
using gradnet::Var;

/// Convolutional denoising autoencoder. 512-sample input in [0,1],
/// 512-sample sigmoid-bounded output. All kernels size 5.
struct AutoencoderModel {
  gradnet::Conv1dLayer enc1, enc2, latent, dec1, dec2, out;
  gradnet::BatchNorm1dLayer bn1, bn2, bn_latent, bn3, bn4;

  Var forward(Tape& t, Var x, Mode mode, Bindings* binds = nullptr) {
    Var h = t.maxpool2(t.relu(bn1.forward(t, enc1.forward(t, x, binds), mode, binds)));
    h = t.maxpool2(t.relu(bn2.forward(t, enc2.forward(t, h, binds), mode, binds)));
    h = t.relu(bn_latent.forward(t, latent.forward(t, h, binds), mode, binds));
    h = t.upsample2(t.relu(bn3.forward(t, dec1.forward(t, h, binds), mode, binds)));
    h = t.upsample2(t.relu(bn4.forward(t, dec2.forward(t, h, binds), mode, binds)));
    return t.sigmoid(out.forward(t, h, binds));
  }

  /// Convenience: flat [512] in, flat [512] out.
  Var forward_flat(Tape& t, Var x512, Mode mode, Bindings* binds = nullptr) {
    const std::size_t n = t.val(x512).size();
    const Var x = t.reshape(x512, {1, n});
    return t.reshape(forward(t, x, mode, binds), {n});
  }

  std::size_t param_count() const {
    return enc1.param_count() + enc2.param_count() + latent.param_count() +
           dec1.param_count() + dec2.param_count() + out.param_count() +
           bn1.param_count() + bn2.param_count() + bn_latent.param_count() +
           bn3.param_count() + bn4.param_count();
  }

  std::vector<NamedTensor> entries() {
    std::vector<NamedTensor> e;
    auto conv = [&](const std::string& n, gradnet::Conv1dLayer& l) {
      e.push_back({n + ".w", l.w.shape, &l.w.data});
      e.push_back({n + ".b", l.b.shape, &l.b.data});
    };
    auto bn = [&](const std::string& n, gradnet::BatchNorm1dLayer& l) {
      e.push_back({n + ".gamma", l.gamma.shape, &l.gamma.data});
      e.push_back({n + ".beta", l.beta.shape, &l.beta.data});
      e.push_back({n + ".run_mean", {l.run_mean.size()}, &l.run_mean});
      e.push_back({n + ".run_var", {l.run_var.size()}, &l.run_var});
    };
    conv("enc1", enc1);
    bn("bn1", bn1);
    conv("enc2", enc2);
    bn("bn2", bn2);
    conv("latent", latent);
    bn("bn_latent", bn_latent);
    conv("dec1", dec1);
    bn("bn3", bn3);
    conv("dec2", dec2);
    bn("bn4", bn4);
    conv("out", out);
    return e;
  }
};

inline AutoencoderModel build_autoencoder(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  AutoencoderModel m;
  using gradnet::InitKind;
  m.enc1 = {32, 1, 5, InitKind::Kaiming, rng};
  m.bn1 = gradnet::BatchNorm1dLayer(32);
  m.enc2 = {64, 32, 5, InitKind::Kaiming, rng};
  m.bn2 = gradnet::BatchNorm1dLayer(64);
  m.latent = {128, 64, 5, InitKind::Kaiming, rng};
  m.bn_latent = gradnet::BatchNorm1dLayer(128);
  m.dec1 = {64, 128, 5, InitKind::Kaiming, rng};
  m.bn3 = gradnet::BatchNorm1dLayer(64);
  m.dec2 = {32, 64, 5, InitKind::Kaiming, rng};
  m.bn4 = gradnet::BatchNorm1dLayer(32);
  m.out = {1, 32, 5, InitKind::Xavier, rng};  // feeds sigmoid
  return m;
}

/// Adversarial discriminator: conv ladder 16/32/64 with LeakyReLU(0.2)
/// and dropout 0.3, then a dense sigmoid head. Training-only; excluded
/// from the inference parameter budget.
struct DiscriminatorModel {
  gradnet::Conv1dLayer c1, c2, c3;
  gradnet::DenseLayer head;
  double dropout_p = 0.3;

  Var forward(Tape& t, Var x, Mode mode, std::mt19937_64& rng,
              Bindings* binds = nullptr) {
    Var h = t.maxpool2(t.dropout(t.leaky_relu(c1.forward(t, x, binds)), dropout_p,
                                 mode, rng));
    h = t.maxpool2(t.dropout(t.leaky_relu(c2.forward(t, h, binds)), dropout_p, mode,
                             rng));
    h = t.maxpool2(t.dropout(t.leaky_relu(c3.forward(t, h, binds)), dropout_p, mode,
                             rng));
    h = t.reshape(h, {t.val(h).size()});
    return t.sigmoid(head.forward(t, h, binds));
  }

  std::size_t param_count() const {
    return c1.param_count() + c2.param_count() + c3.param_count() +
           head.param_count();
  }

  std::vector<NamedTensor> entries() {
    std::vector<NamedTensor> e;
    auto add = [&](const std::string& n, gradnet::Tensor& w) {
      e.push_back({n, w.shape, &w.data});
    };
    add("c1.w", c1.w);
    add("c1.b", c1.b);
    add("c2.w", c2.w);
    add("c2.b", c2.b);
    add("c3.w", c3.w);
    add("c3.b", c3.b);
    add("head.w", head.w);
    add("head.b", head.b);
    return e;
  }
};

inline DiscriminatorModel build_discriminator(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DiscriminatorModel m;
  using gradnet::InitKind;
  m.c1 = {16, 1, 5, InitKind::Kaiming, rng};
  m.c2 = {32, 16, 5, InitKind::Kaiming, rng};
  m.c3 = {64, 32, 5, InitKind::Kaiming, rng};
  m.head = {1, 64 * 64, InitKind::Xavier, rng};  // 512 -> 64 after three pools
  return m;
}

inline constexpr std::size_t kLcFrames = 64;
inline constexpr std::size_t kLcFrameWidth = 8;  // 512 = 64 x 8

/// LSTM-CNN meta-targeting ensemble: three base predictors each emitting
/// 3-way SNR-class scores, aggregated by an MLP meta-classifier over the
/// concatenated 9 scores. Inputs must be min-max normalized to [0,1].
struct LcEnsembleModel {
  // Base (a): LSTM over framed input, dense head.
  gradnet::LstmLayer a_lstm;
  gradnet::DenseLayer a_head;
  // Base (b): two-block CNN, dense head.
  gradnet::Conv1dLayer b_c1, b_c2;
  gradnet::DenseLayer b_head;
  // Base (c): hybrid LSTM + conv features into a small MLP.
  gradnet::LstmLayer c_lstm;
  gradnet::Conv1dLayer c_conv;
  gradnet::DenseLayer c_fc1, c_fc2;
  // Meta-classifier over the 9 concatenated base scores.
  gradnet::DenseLayer meta_fc1, meta_fc2;
  // Ablation mask for the harness; an inactive base contributes zeros.
  std::array<bool, 3> active = {true, true, true};

  Var base_logits(Tape& t, Var x512, std::size_t which, Bindings* binds = nullptr) {
    const std::size_t n = t.val(x512).size();
    if (which == 0) {
      const Var framed = t.reshape(x512, {kLcFrames, kLcFrameWidth});
      const Var hs = a_lstm.forward(t, framed, binds);
      const Var last = t.slice(hs, (kLcFrames - 1) * a_lstm.hidden, a_lstm.hidden);
      return a_head.forward(t, last, binds);
    }
    if (which == 1) {
      Var h = t.reshape(x512, {1, n});
      h = t.maxpool2(t.relu(b_c1.forward(t, h, binds)));
      h = t.maxpool2(t.relu(b_c2.forward(t, h, binds)));
      h = t.reshape(h, {t.val(h).size()});
      return b_head.forward(t, h, binds);
    }
    // Hybrid: LSTM final hidden state + channel-averaged conv features.
    const Var framed = t.reshape(x512, {kLcFrames, kLcFrameWidth});
    const Var hs = c_lstm.forward(t, framed, binds);
    const Var last = t.slice(hs, (kLcFrames - 1) * c_lstm.hidden, c_lstm.hidden);
    Var conv = t.relu(c_conv.forward(t, t.reshape(x512, {1, n}), binds));
    const std::size_t channels = c_conv.w.shape[0];
    std::vector<Var> pooled;
    pooled.reserve(channels);
    for (std::size_t c = 0; c < channels; ++c)
      pooled.push_back(t.mean(t.slice(conv, c * n, n)));
    const Var feats = t.concat(last, t.reshape(t.stack_rows(pooled), {channels}));
    return c_fc2.forward(t, t.relu(c_fc1.forward(t, feats, binds)), binds);
  }

  Var base_scores(Tape& t, Var x512, std::size_t which, Bindings* binds = nullptr) {
    return t.softmax(base_logits(t, x512, which, binds));
  }

  /// Concatenated 9-score vector; inactive bases contribute zeros.
  Var stacked_scores(Tape& t, Var x512, Bindings* binds = nullptr) {
    Var acc = -1;
    for (std::size_t i = 0; i < 3; ++i) {
      const Var s = active[i] ? base_scores(t, x512, i, binds)
                              : t.leaf(gradnet::Tensor({3}));
      acc = (acc < 0) ? s : t.concat(acc, s);
    }
    return acc;
  }

  /// Meta-classifier logits over the three SNR classes.
  Var forward(Tape& t, Var x512, Bindings* binds = nullptr) {
    const Var scores = stacked_scores(t, x512, binds);
    return meta_fc2.forward(t, t.relu(meta_fc1.forward(t, scores, binds)), binds);
  }

  /// Meta logits from precomputed base scores (meta training path).
  Var forward_meta(Tape& t, Var scores9, Bindings* binds = nullptr) {
    return meta_fc2.forward(t, t.relu(meta_fc1.forward(t, scores9, binds)), binds);
  }

  std::size_t param_count() const {
    return a_lstm.param_count() + a_head.param_count() + b_c1.param_count() +
           b_c2.param_count() + b_head.param_count() + c_lstm.param_count() +
           c_conv.param_count() + c_fc1.param_count() + c_fc2.param_count() +
           meta_fc1.param_count() + meta_fc2.param_count();
  }

  std::vector<NamedTensor> entries() {
    std::vector<NamedTensor> e;
    auto add = [&](const std::string& n, gradnet::Tensor& w) {
      e.push_back({n, w.shape, &w.data});
    };
    add("a_lstm.w", a_lstm.w);
    add("a_lstm.b", a_lstm.b);
    add("a_head.w", a_head.w);
    add("a_head.b", a_head.b);
    add("b_c1.w", b_c1.w);
    add("b_c1.b", b_c1.b);
    add("b_c2.w", b_c2.w);
    add("b_c2.b", b_c2.b);
    add("b_head.w", b_head.w);
    add("b_head.b", b_head.b);
    add("c_lstm.w", c_lstm.w);
    add("c_lstm.b", c_lstm.b);
    add("c_conv.w", c_conv.w);
    add("c_conv.b", c_conv.b);
    add("c_fc1.w", c_fc1.w);
    add("c_fc1.b", c_fc1.b);
    add("c_fc2.w", c_fc2.w);
    add("c_fc2.b", c_fc2.b);
    add("meta_fc1.w", meta_fc1.w);
    add("meta_fc1.b", meta_fc1.b);
    add("meta_fc2.w", meta_fc2.w);
    add("meta_fc2.b", meta_fc2.b);
    return e;
  }
};

inline LcEnsembleModel build_lc_ensemble(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LcEnsembleModel m;
  using gradnet::InitKind;
  m.a_lstm = {kLcFrameWidth, 32, rng};
  m.a_head = {3, 32, InitKind::Xavier, rng};
  m.b_c1 = {16, 1, 5, InitKind::Kaiming, rng};
  m.b_c2 = {32, 16, 5, InitKind::Kaiming, rng};
  m.b_head = {3, 32 * 128, InitKind::Xavier, rng};
  m.c_lstm = {kLcFrameWidth, 16, rng};
  m.c_conv = {16, 1, 5, InitKind::Kaiming, rng};
  m.c_fc1 = {16, 16 + 16, InitKind::Kaiming, rng};
  m.c_fc2 = {3, 16, InitKind::Xavier, rng};
  m.meta_fc1 = {16, 9, InitKind::Kaiming, rng};
  m.meta_fc2 = {3, 16, InitKind::Xavier, rng};
  return m;
}

template <typename Model>
std::size_t count_params(const Model& model) {
  return model.param_count();
}

}  // namespace tada::models
