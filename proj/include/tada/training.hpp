#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tada/adam.hpp"
#include "tada/calibration.hpp"
#include "tada/metrics.hpp"
#include "tada/mixing.hpp"
#include "tada/models.hpp"
#include "tada/segment.hpp"
#include "tada/targeting.hpp"

namespace tada::training {

using gradnet::AdamState;
using gradnet::Bindings;
using gradnet::Mode;
using gradnet::Tape;
using gradnet::Tensor;
using gradnet::Var;

struct LossWeights {
  double w_cc = 1.0;
  double w_spec = 0.5;
  double w_ent = 0.01;
  double eps_var = 1e-6;
};

struct TrainConfig {
  std::size_t cycles = 5;
  std::size_t epochs_per_cycle_gen = 4;
  std::size_t epochs_per_cycle_disc = 2;
  std::size_t pretrain_epochs = 10;
  std::size_t batch = 16;
  double w_adv = 0.2;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  std::size_t train_size = 300;
  LossWeights loss;
};

struct CycleReport {
  std::size_t cycle = 0;
  double gen_loss = 0.0;
  double disc_loss = 0.0;
  double heldout_cc = 0.0;
  double heldout_trrmse = 0.0;
  double heldout_srrmse = 0.0;
  double disc_accuracy = 0.0;
};

/// One training sample: the contaminated pair plus the AE-facing
/// normalized views (mixture mapped to [0,1]; clean mapped through the
/// same offset/span so both live in one frame).
struct TrainPair {
  ContaminatedPair contaminated;
  SnrLevel level = SnrLevel::Mid;
  Segment input;
  Segment target;
};

inline TrainPair make_train_pair(ContaminatedPair pair, SnrLevel level) {
  TrainPair tp;
  tp.level = level;
  const MinMaxNorm norm = normalize_minmax(pair.mixture);
  tp.input = norm.normalized;
  tp.target.rate_hz = pair.clean.rate_hz;
  tp.target.samples.reserve(pair.clean.size());
  for (double v : pair.clean.samples)
    tp.target.samples.push_back((v - norm.offset) / norm.span);
  tp.contaminated = std::move(pair);
  return tp;
}

/// Correlation-driven AE objective:
///   w_cc*(1 - CC) + w_spec*mean((p_out - p_truth)^2) + w_ent*(-log(Var+eps))
/// with unit-normalized power spectra. Differentiable end to end.
inline Var ae_loss(Tape& t, Var output, Var truth, const LossWeights& w) {
  const Var cc = t.pearson(output, truth);
  const Var cc_term = t.scale(t.add_const(t.scale(cc, -1.0), 1.0), w.w_cc);
  const Var ps_o = t.power_spectrum(output);
  const Var ps_t = t.power_spectrum(truth);
  const Var po = t.div_scalar(ps_o, t.sum(ps_o));
  const Var pt = t.div_scalar(ps_t, t.sum(ps_t));
  const Var d = t.sub(po, pt);
  const Var spec_term = t.scale(t.mean(t.mul(d, d)), w.w_spec);
  const Var mu = t.mean(output);
  const Var centered = t.sub_scalar(output, mu);
  const Var variance = t.mean(t.mul(centered, centered));
  const Var ent_term = t.scale(t.log_shifted(variance, w.eps_var), -w.w_ent);
  return t.add(t.add(cc_term, spec_term), ent_term);
}

/// Accumulates gradients across the samples of a batch in fixed binding
/// order, then applies one Adam step per parameter tensor.
class ParamUpdater {
 public:
  explicit ParamUpdater(double lr) : lr_(lr) {}

  void accumulate(Tape& t, const Bindings& binds) {
    if (order_.empty()) {
      for (const auto& b : binds) {
        order_.push_back(b.tensor);
        grads_.emplace_back(b.tensor->shape);
      }
    }
    for (std::size_t i = 0; i < binds.size(); ++i) {
      const Tensor& g = t.grad(binds[i].var);
      for (std::size_t j = 0; j < g.size(); ++j) grads_[i][j] += g[j];
    }
    ++count_;
  }

  void set_lr(double lr) { lr_ = lr; }

  void step() {
    if (count_ == 0) return;
    const double inv = 1.0 / static_cast<double>(count_);
    for (std::size_t i = 0; i < order_.size(); ++i) {
      for (double& g : grads_[i].data) g *= inv;
      AdamState& st = states_[order_[i]];
      st.lr = lr_;
      adam_step(*order_[i], grads_[i], st);
      for (double& g : grads_[i].data) g = 0.0;
    }
    count_ = 0;
  }

 private:
  double lr_;
  std::vector<Tensor*> order_;
  std::vector<Tensor> grads_;
  std::size_t count_ = 0;
  std::unordered_map<Tensor*, AdamState> states_;
};

namespace detail {

inline std::vector<std::size_t> shuffled_indices(std::size_t n,
                                                 std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

}  // namespace detail

/// Raw (unrescaled) AE output for one normalized input. Instance mode:
/// the AE trains on per-sample batch statistics, so inference must
/// normalize the same way or accuracy degrades away from the training
/// input distribution's center.
inline Segment ae_infer(models::AutoencoderModel& ae, const Segment& input) {
  Tape t;
  const Var x = t.leaf(Tensor::vector1d(input.samples));
  const Var y = ae.forward_flat(t, x, Mode::Instance);
  Segment out;
  out.rate_hz = input.rate_hz;
  out.samples = t.val(y).data;
  return out;
}

/// Generator-side epochs shared by pretraining and the adversarial
/// regime. With w_adv = 0 and no discriminator this is plain AE
/// training on ae_loss.
inline double generator_epoch(models::AutoencoderModel& ae,
                              models::DiscriminatorModel* disc,
                              const std::vector<TrainPair>& pairs,
                              const CalibrationStats* cal,
                              const TrainConfig& cfg, ParamUpdater& updater,
                              std::mt19937_64& order_rng,
                              std::mt19937_64& disc_rng) {
  const auto idx = detail::shuffled_indices(pairs.size(), order_rng);
  double loss_sum = 0.0;
  std::size_t in_batch = 0;
  for (std::size_t n = 0; n < idx.size(); ++n) {
    const TrainPair& tp = pairs[idx[n]];
    Tape t;
    Bindings binds;
    const Var x = t.leaf(Tensor::vector1d(tp.input.samples));
    const Var truth = t.leaf(Tensor::vector1d(tp.target.samples));
    const Var out = ae.forward_flat(t, x, Mode::Train, &binds);
    Var loss = ae_loss(t, out, truth, cfg.loss);
    if (disc != nullptr && cfg.w_adv > 0.0 && cal != nullptr) {
      // Rescale before the discriminator; the affine coefficients are
      // treated as constants (no gradient through the targeting stats).
      Segment raw;
      raw.samples = t.val(out).data;
      const auto [rescaled, outcome] = targeting::scale_targeting(
          raw, tp.contaminated.mixture, targeting::TargetingParams{}, *cal,
          tp.level);
      const Var disc_in = t.reshape(
          t.add_const(t.scale(out, outcome.scale), outcome.offset),
          {1, t.val(out).size()});
      const Var p = disc->forward(t, disc_in, Mode::Eval, disc_rng);
      loss = t.add(loss, t.scale(t.bce(p, 1.0), cfg.w_adv));
    }
    t.backward(loss);
    loss_sum += t.val(loss)[0];
    updater.accumulate(t, binds);
    if (++in_batch == cfg.batch || n + 1 == idx.size()) {
      updater.step();
      in_batch = 0;
    }
  }
  return loss_sum / static_cast<double>(pairs.size());
}

/// Initial AE training on the correlation-driven loss. Returns the
/// per-epoch mean loss trajectory; zero epochs leaves the model unchanged.
inline std::vector<double> pretrain_autoencoder(models::AutoencoderModel& ae,
                                                const std::vector<TrainPair>& pairs,
                                                const TrainConfig& cfg,
                                                std::ostream* log = nullptr) {
  ParamUpdater updater(cfg.lr);
  std::mt19937_64 order_rng(cfg.seed ^ 0x67e6c7493ab5cdfULL);
  std::mt19937_64 disc_rng(0);  // unused on this path
  std::vector<double> trajectory;
  for (std::size_t e = 0; e < cfg.pretrain_epochs; ++e) {
    const double mean_loss = generator_epoch(ae, nullptr, pairs, nullptr, cfg,
                                             updater, order_rng, disc_rng);
    trajectory.push_back(mean_loss);
    if (log) *log << "0," << e << ',' << mean_loss << ",," << '\n';
  }
  return trajectory;
}

/// Calibration statistics from training data: per-level dataset-average
/// offset and amplitude ratio between ground truth and the raw denoiser
/// output, plus the p99 amplitude of ground truth.
inline CalibrationStats compute_calibration(
    const std::vector<TrainPair>& pairs,
    const std::function<Segment(const TrainPair&)>& denoiser) {
  std::array<std::vector<std::pair<double, double>>, 3> per_level;  // offset, ratio
  std::vector<double> amplitudes;
  for (const TrainPair& tp : pairs) {
    const Segment raw = denoiser(tp);
    const Segment& truth = tp.contaminated.clean;
    const double off = mean_of(truth.samples) - mean_of(raw.samples);
    const double sd_raw = stddev_of(raw.samples);
    const double ratio = sd_raw > 0.0 ? stddev_of(truth.samples) / sd_raw : 1.0;
    per_level[index_of(tp.level)].emplace_back(off, ratio);
    for (double v : truth.samples) amplitudes.push_back(std::fabs(v));
  }
  CalibrationStats cal;
  for (std::size_t i = 0; i < 3; ++i) {
    if (per_level[i].size() < 30)
      throw InsufficientData("need >= 30 pairs per SNR level for calibration");
    double off = 0.0, ratio = 0.0;
    for (const auto& [o, r] : per_level[i]) {
      off += o;
      ratio += r;
    }
    cal.levels[i].mean_offset = off / static_cast<double>(per_level[i].size());
    cal.levels[i].amp_ratio = ratio / static_cast<double>(per_level[i].size());
    cal.present[i] = true;
  }
  std::sort(amplitudes.begin(), amplitudes.end());
  const std::size_t k = static_cast<std::size_t>(
      std::ceil(0.99 * static_cast<double>(amplitudes.size())));
  cal.p99_amplitude = amplitudes[std::min(k == 0 ? 0 : k - 1, amplitudes.size() - 1)];
  return cal;
}

inline CalibrationStats compute_calibration(const std::vector<TrainPair>& pairs,
                                            models::AutoencoderModel& ae) {
  return compute_calibration(
      pairs, [&ae](const TrainPair& tp) { return ae_infer(ae, tp.input); });
}

/// Held-out metric means: AE + scale targeting against ground truth.
inline MetricsTriple evaluate_pipeline_means(models::AutoencoderModel& ae,
                                             const std::vector<TrainPair>& pairs,
                                             const CalibrationStats& cal) {
  MetricsTriple acc;
  for (const TrainPair& tp : pairs) {
    const Segment raw = ae_infer(ae, tp.input);
    const auto [rescaled, outcome] = targeting::scale_targeting(
        raw, tp.contaminated.mixture, targeting::TargetingParams{}, cal, tp.level);
    const MetricsTriple m = compute_metrics(rescaled, tp.contaminated.clean);
    acc.cc += m.cc;
    acc.trrmse += m.trrmse;
    acc.srrmse += m.srrmse;
  }
  const double n = static_cast<double>(pairs.size());
  return {acc.cc / n, acc.trrmse / n, acc.srrmse / n};
}

/// Five-cycle (by default) generator-discriminator regime. Returns one
/// report per completed cycle.
inline std::vector<CycleReport> adversarial_train(
    models::AutoencoderModel& ae, models::DiscriminatorModel& disc,
    const std::vector<TrainPair>& pairs, const std::vector<TrainPair>& heldout,
    const CalibrationStats& cal, const TrainConfig& cfg,
    std::ostream* log = nullptr) {
  ParamUpdater gen_updater(cfg.lr);
  ParamUpdater disc_updater(cfg.lr);
  std::mt19937_64 gen_order_rng(cfg.seed ^ 0x67e6c7493ab5cdfULL);
  std::mt19937_64 disc_order_rng(cfg.seed ^ 0x94d049bb133111ebULL);
  std::mt19937_64 disc_dropout_rng(cfg.seed ^ 0xd1b54a32d192ed03ULL);
  std::mt19937_64 gen_disc_rng(0);  // disc runs in Eval on the generator path
  std::vector<CycleReport> reports;
  const std::vector<TrainPair>& eval_pairs = heldout.empty() ? pairs : heldout;

  for (std::size_t cycle = 0; cycle < cfg.cycles; ++cycle) {
    CycleReport report;
    report.cycle = cycle;

    for (std::size_t e = 0; e < cfg.epochs_per_cycle_gen; ++e) {
      report.gen_loss = generator_epoch(ae, cfg.w_adv > 0.0 ? &disc : nullptr,
                                        pairs, &cal, cfg, gen_updater,
                                        gen_order_rng, gen_disc_rng);
      if (log)
        *log << cycle << ',' << e << ',' << report.gen_loss << ','
             << report.disc_loss << ',' << '\n';
    }

    for (std::size_t e = 0; e < cfg.epochs_per_cycle_disc; ++e) {
      const auto idx = detail::shuffled_indices(pairs.size(), disc_order_rng);
      double loss_sum = 0.0;
      std::size_t in_batch = 0;
      for (std::size_t n = 0; n < idx.size(); ++n) {
        const TrainPair& tp = pairs[idx[n]];
        const Segment raw = ae_infer(ae, tp.input);
        const auto [generated, outcome] = targeting::scale_targeting(
            raw, tp.contaminated.mixture, targeting::TargetingParams{}, cal,
            tp.level);
        Tape t;
        Bindings binds;
        const Var real_in =
            t.reshape(t.leaf(Tensor::vector1d(tp.contaminated.clean.samples)),
                      {1, tp.contaminated.clean.size()});
        const Var fake_in = t.reshape(t.leaf(Tensor::vector1d(generated.samples)),
                                      {1, generated.size()});
        const Var p_real =
            disc.forward(t, real_in, Mode::Train, disc_dropout_rng, &binds);
        const Var p_fake = disc.forward(t, fake_in, Mode::Train, disc_dropout_rng);
        const Var loss =
            t.scale(t.add(t.bce(p_real, 1.0), t.bce(p_fake, 0.0)), 0.5);
        t.backward(loss);
        loss_sum += t.val(loss)[0];
        disc_updater.accumulate(t, binds);
        if (++in_batch == cfg.batch || n + 1 == idx.size()) {
          disc_updater.step();
          in_batch = 0;
        }
      }
      report.disc_loss = loss_sum / static_cast<double>(pairs.size());
      if (log)
        *log << cycle << ",d" << e << ',' << report.gen_loss << ','
             << report.disc_loss << ',' << '\n';
    }

    // Parity monitor: discriminator accuracy on held-out real/generated.
    std::size_t correct = 0, total = 0;
    for (const TrainPair& tp : eval_pairs) {
      const Segment raw = ae_infer(ae, tp.input);
      const auto [generated, outcome] = targeting::scale_targeting(
          raw, tp.contaminated.mixture, targeting::TargetingParams{}, cal,
          tp.level);
      Tape t;
      const Var real_in =
          t.reshape(t.leaf(Tensor::vector1d(tp.contaminated.clean.samples)),
                    {1, tp.contaminated.clean.size()});
      const Var fake_in = t.reshape(t.leaf(Tensor::vector1d(generated.samples)),
                                    {1, generated.size()});
      if (t.val(disc.forward(t, real_in, Mode::Eval, disc_dropout_rng))[0] > 0.5)
        ++correct;
      if (t.val(disc.forward(t, fake_in, Mode::Eval, disc_dropout_rng))[0] <= 0.5)
        ++correct;
      total += 2;
    }
    report.disc_accuracy = static_cast<double>(correct) / static_cast<double>(total);

    const MetricsTriple m = evaluate_pipeline_means(ae, eval_pairs, cal);
    report.heldout_cc = m.cc;
    report.heldout_trrmse = m.trrmse;
    report.heldout_srrmse = m.srrmse;
    if (log)
      *log << cycle << ",end," << report.gen_loss << ',' << report.disc_loss << ','
           << report.heldout_cc << '\n';
    reports.push_back(report);
  }
  return reports;
}

// ---- LC meta-targeter training ----

struct MetaReport {
  double accuracy = 0.0;
  double mean_loss = 0.0;
  std::size_t epochs_run = 0;
};

namespace detail {

inline Segment lc_prepare(const Segment& mixture) {
  return normalize_minmax(mixture).normalized;
}

inline std::size_t argmax3(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace detail

/// Trains the three base predictors, then the meta-classifier on their
/// score vectors. `data` must hold every SNR class; the last
/// `heldout_count` samples form the test partition. Set `ablate_base`
/// to 0..2 to drop one base (its score block becomes zeros and only the
/// meta-classifier is retrained around it). Pass `train_bases = false`
/// to keep already-trained base weights and fit only the meta head.
inline MetaReport train_meta_targeter(models::LcEnsembleModel& model,
                                      const std::vector<Segment>& data,
                                      const std::vector<SnrLevel>& labels,
                                      std::size_t epochs, std::uint64_t seed,
                                      std::size_t heldout_count = 100,
                                      int ablate_base = -1,
                                      bool train_bases = true) {
  if (data.size() != labels.size() || data.size() <= heldout_count)
    throw InsufficientData("meta-targeter: bad data/label sizes");
  const std::size_t n_train = data.size() - heldout_count;
  std::array<std::size_t, 3> class_counts = {0, 0, 0};
  for (std::size_t i = 0; i < n_train; ++i) ++class_counts[index_of(labels[i])];
  for (std::size_t c : class_counts)
    if (c == 0) throw InsufficientData("meta-targeter: missing SNR class");

  if (ablate_base >= 0) model.active[static_cast<std::size_t>(ablate_base)] = false;

  std::vector<Segment> inputs;
  inputs.reserve(data.size());
  for (const Segment& s : data) inputs.push_back(detail::lc_prepare(s));

  const std::size_t batch = 16;
  const double base_lr = 2e-3;
  const double meta_lr = 1e-3;
  // Step decay: halve at the midpoint, quarter over the final stretch.
  const auto lr_at = [&](double lr0, std::size_t e) {
    return lr0 * (e >= 3 * epochs / 4 ? 0.25 : e >= epochs / 2 ? 0.5 : 1.0);
  };

  // Base predictors, trained independently on cross-entropy. Training
  // inputs get a per-epoch random circular shift: the SNR class is
  // shift-invariant, and the augmentation stops the convolutional base
  // from memorizing absolute sample positions.
  for (std::size_t which = 0; which < 3 && train_bases; ++which) {
    if (!model.active[which]) continue;
    ParamUpdater updater(base_lr);
    std::mt19937_64 order_rng(seed ^ (0x9e3779b97f4a7c15ULL * (which + 1)));
    std::mt19937_64 aug_rng(seed ^ (0xda942042e4dd58b5ULL * (which + 1)));
    std::size_t perfect_streak = 0;
    for (std::size_t e = 0; e < epochs; ++e) {
      updater.set_lr(lr_at(base_lr, e));
      const auto idx = detail::shuffled_indices(n_train, order_rng);
      std::size_t correct = 0, in_batch = 0;
      for (std::size_t n = 0; n < idx.size(); ++n) {
        const std::size_t s = idx[n];
        const auto& src = inputs[s].samples;
        const std::size_t len = src.size();
        const std::size_t sh = aug_rng() % len;
        std::vector<double> shifted(len);
        for (std::size_t i = 0; i < len; ++i) shifted[i] = src[(i + sh) % len];
        Tape t;
        Bindings binds;
        const Var x = t.leaf(Tensor::vector1d(shifted));
        const Var logits = model.base_logits(t, x, which, &binds);
        const Var loss = t.cross_entropy(logits, index_of(labels[s]));
        if (detail::argmax3(t.val(logits).data) == index_of(labels[s])) ++correct;
        t.backward(loss);
        updater.accumulate(t, binds);
        if (++in_batch == batch || n + 1 == idx.size()) {
          updater.step();
          in_batch = 0;
        }
      }
      perfect_streak = (correct == n_train) ? perfect_streak + 1 : 0;
      if (perfect_streak >= 2) break;  // class boundaries solved
    }
  }

  // Cache base score vectors; ablated bases contribute zeros.
  auto scores_for = [&](const Segment& input) {
    std::vector<double> scores(9, 0.0);
    for (std::size_t which = 0; which < 3; ++which) {
      if (!model.active[which]) continue;
      Tape t;
      const Var x = t.leaf(Tensor::vector1d(input.samples));
      const Var s = model.base_scores(t, x, which);
      for (std::size_t k = 0; k < 3; ++k) scores[which * 3 + k] = t.val(s)[k];
    }
    return scores;
  };
  std::vector<std::vector<double>> all_scores;
  all_scores.reserve(inputs.size());
  for (const Segment& in : inputs) all_scores.push_back(scores_for(in));

  // Meta-classifier over the concatenated scores.
  MetaReport report;
  {
    ParamUpdater updater(meta_lr);
    std::mt19937_64 order_rng(seed ^ 0x2545f4914f6cdd1dULL);
    std::size_t perfect_streak = 0;
    for (std::size_t e = 0; e < epochs; ++e) {
      ++report.epochs_run;
      updater.set_lr(lr_at(meta_lr, e));
      const auto idx = detail::shuffled_indices(n_train, order_rng);
      std::size_t correct = 0, in_batch = 0;
      for (std::size_t n = 0; n < idx.size(); ++n) {
        const std::size_t s = idx[n];
        Tape t;
        Bindings binds;
        const Var scores = t.leaf(Tensor::vector1d(all_scores[s]));
        const Var logits = model.forward_meta(t, scores, &binds);
        const Var loss = t.cross_entropy(logits, index_of(labels[s]));
        if (detail::argmax3(t.val(logits).data) == index_of(labels[s])) ++correct;
        t.backward(loss);
        updater.accumulate(t, binds);
        if (++in_batch == batch || n + 1 == idx.size()) {
          updater.step();
          in_batch = 0;
        }
      }
      perfect_streak = (correct == n_train) ? perfect_streak + 1 : 0;
      if (perfect_streak >= 3) break;
    }
  }

  // Held-out evaluation.
  std::size_t correct = 0;
  double loss_sum = 0.0;
  for (std::size_t s = n_train; s < data.size(); ++s) {
    Tape t;
    const Var scores = t.leaf(Tensor::vector1d(all_scores[s]));
    const Var logits = model.forward_meta(t, scores);
    loss_sum += t.val(t.cross_entropy(logits, index_of(labels[s])))[0];
    if (detail::argmax3(t.val(logits).data) == index_of(labels[s])) ++correct;
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(heldout_count);
  report.mean_loss = loss_sum / static_cast<double>(heldout_count);
  return report;
}

/// Meta-targeter class prediction for a min-max-normalized segment.
inline SnrLevel predict_level(models::LcEnsembleModel& model,
                              const Segment& normalized) {
  Tape t;
  const Var x = t.leaf(Tensor::vector1d(normalized.samples));
  const Var logits = model.forward(t, x);
  return static_cast<SnrLevel>(detail::argmax3(t.val(logits).data));
}

}  // namespace tada::training
