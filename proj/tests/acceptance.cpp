// Acceptance harness: prints one pass/fail line per criterion and exits
// nonzero if any active criterion fails. Criterion 13 needs an external
// EEG/EMG corpus and is skipped automatically when it is absent.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tada/tada.hpp"

#include "oracles.hpp"

using namespace tada;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int idx, bool ok, const std::string& what, double elapsed_s) {
  std::ostringstream line;
  line << (ok ? "[PASS]" : "[FAIL]") << " criterion " << idx << ": " << what
       << " (" << elapsed_s << " s)";
  std::cout << line.str() << std::endl;
  if (!ok) ++failures;
}

void skip(int idx, const std::string& what) {
  std::cout << "[SKIP] criterion " << idx << ": " << what << std::endl;
}

// ---- criterion 1: mixing fidelity ----
void criterion_1() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> snr(-10.0, 5.0);
  bool ok = true;
  for (int i = 0; i < 1000 && ok; ++i) {
    const Segment clean = oracles::seg_of(oracles::random_vec(rng, 128));
    const Segment artifact = oracles::seg_of(oracles::random_vec(rng, 128));
    const double request = snr(rng);
    const ContaminatedPair pair = mix_at_snr(clean, artifact, request);
    if (std::fabs(realized_snr_db(pair) - request) > 1e-6) ok = false;
  }
  const double dt = secs_since(t0);
  report(1, ok && dt < 5.0, "SNR of 1000 random mixes within 1e-6 dB", dt);
}

// ---- criterion 2: metric identities ----
void criterion_2() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1002);
  const Segment x = oracles::seg_of(oracles::random_vec(rng, 512));
  Segment nx = x, zeros = x;
  for (double& v : nx.samples) v = -v;
  for (double& v : zeros.samples) v = 0.0;
  Segment shifted = x;
  std::rotate(shifted.samples.begin(), shifted.samples.begin() + 101,
              shifted.samples.end());
  const bool ok = std::fabs(pearson_cc(x, x) - 1.0) < 1e-9 &&
                  std::fabs(pearson_cc(x, nx) + 1.0) < 1e-9 &&
                  std::fabs(trrmse(x, x)) < 1e-9 &&
                  std::fabs(trrmse(zeros, x) - 1.0) < 1e-9 &&
                  std::fabs(srrmse(shifted, x)) < 1e-9;
  report(2, ok, "CC/TRRMSE/SRRMSE identities within 1e-9", secs_since(t0));
}

// ---- criterion 3: spectral oracle ----
void criterion_3() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1003);
  bool ok = true;
  for (int rep = 0; rep < 100 && ok; ++rep) {
    const std::vector<double> x = oracles::random_vec(rng, 512);
    const PowerSpectrum fast = power_spectrum(oracles::seg_of(x));
    const std::vector<double> slow = oracles::naive_dft_power(x);
    for (std::size_t k = 0; k < slow.size(); ++k) {
      const double denom = std::max(std::fabs(slow[k]), 1e-12);
      if (std::fabs(fast.bins[k] - slow[k]) / denom > 1e-9) ok = false;
    }
  }
  const double dt = secs_since(t0);
  report(3, ok && dt < 10.0, "power spectrum matches direct DFT on 100 segments",
         dt);
}

// ---- criterion 4: gradient suite ----
using gradnet::Mode;
using gradnet::Tape;
using gradnet::Tensor;
using gradnet::Var;
using Builder = std::function<Var(Tape&, Var)>;

double grad_check(std::mt19937_64& rng, std::size_t n, const Builder& build,
                  std::vector<std::size_t> shape = {}, double lo = -1.0,
                  double hi = 1.0) {
  const std::vector<double> x0 = oracles::random_vec(rng, n, lo, hi);
  std::vector<double> proj;
  {
    Tape t;
    const Var leaf = t.leaf(shape.empty() ? Tensor::vector1d(x0) : Tensor(shape, x0));
    proj = oracles::random_vec(rng, t.val(build(t, leaf)).size());
  }
  auto f = [&](const std::vector<double>& x, std::vector<double>* grad) {
    Tape t;
    const Var leaf = t.leaf(shape.empty() ? Tensor::vector1d(x) : Tensor(shape, x));
    const Var out = build(t, leaf);
    Var loss = out;
    if (t.val(out).size() != 1)
      loss = t.sum(t.mul(t.reshape(out, {t.val(out).size()}),
                         t.leaf(Tensor::vector1d(proj))));
    t.backward(loss);
    if (grad) *grad = t.grad(leaf).data;
    return t.val(loss)[0];
  };
  return oracles::fd_check(x0, f);
}

void criterion_4() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1004);
  double worst = 0.0;
  auto run = [&](std::size_t n, const Builder& b,
                 std::vector<std::size_t> shape = {}, double lo = -1.0,
                 double hi = 1.0) {
    for (int rep = 0; rep < 50; ++rep)
      worst = std::max(worst, grad_check(rng, n, b, shape, lo, hi));
  };
  run(9, [](Tape& t, Var x) { return t.add(x, t.scale(x, 0.7)); });
  run(9, [](Tape& t, Var x) { return t.sub(t.mul(x, x), t.add_const(x, 0.3)); });
  run(9, [](Tape& t, Var x) { return t.relu(x); });
  run(9, [](Tape& t, Var x) { return t.leaky_relu(x); });
  run(9, [](Tape& t, Var x) { return t.sigmoid(x); });
  run(9, [](Tape& t, Var x) { return t.tanh_act(x); });
  run(9, [](Tape& t, Var x) { return t.log_shifted(t.mul(x, x), 0.1); });
  run(9, [](Tape& t, Var x) { return t.sum(x); });
  run(9, [](Tape& t, Var x) { return t.mean(x); });
  run(8, [](Tape& t, Var x) {
    return t.mul_scalar(t.slice(x, 0, 7), t.slice(x, 7, 1));
  });
  run(8, [](Tape& t, Var x) {
    return t.div_scalar(t.slice(x, 0, 7), t.add_const(t.slice(x, 7, 1), 3.0));
  });
  run(8, [](Tape& t, Var x) {
    return t.sub_scalar(t.slice(x, 0, 7), t.slice(x, 7, 1));
  });
  run(10, [](Tape& t, Var x) {
    return t.concat(t.slice(x, 0, 4), t.slice(x, 4, 6));
  });
  run(9, [](Tape& t, Var x) { return t.softmax(x); });
  run(5, [](Tape& t, Var x) { return t.cross_entropy(x, 2); });
  run(1, [](Tape& t, Var x) { return t.bce(x, 1.0); }, {}, 0.1, 0.9);
  run(12, [](Tape& t, Var x) { return t.power_spectrum(t.slice(x, 0, 8)); });
  run(16, [](Tape& t, Var x) { return t.maxpool2(x); }, {2, 8});
  run(12, [](Tape& t, Var x) { return t.upsample2(x); }, {2, 6});

  {
    Tensor kw({2, 2, 5}, oracles::random_vec(rng, 20));
    Tensor bw({2}, oracles::random_vec(rng, 2));
    run(24, [&](Tape& t, Var x) { return t.conv1d(x, t.leaf(kw), t.leaf(bw)); },
        {2, 12});
    Tensor xw({2, 12}, oracles::random_vec(rng, 24));
    run(20, [&](Tape& t, Var k) {
      return t.conv1d(t.leaf(xw), t.reshape(k, {2, 2, 5}), t.leaf(bw));
    });
  }
  {
    Tensor ww({4, 6}, oracles::random_vec(rng, 24));
    Tensor bw({4}, oracles::random_vec(rng, 4));
    run(6, [&](Tape& t, Var x) { return t.dense(x, t.leaf(ww), t.leaf(bw)); });
  }
  {
    Tensor gw({2}, oracles::random_vec(rng, 2, 0.5, 1.5));
    Tensor bw({2}, oracles::random_vec(rng, 2));
    run(20, [&](Tape& t, Var x) {
      return t.batchnorm1d(x, t.leaf(gw), t.leaf(bw), Mode::Train, {}, {});
    }, {2, 10});
  }
  for (int rep = 0; rep < 50; ++rep) {
    const std::uint64_t seed = 5000 + rep;
    worst = std::max(worst, grad_check(rng, 16, [&](Tape& t, Var x) {
      std::mt19937_64 mask_rng(seed);
      return t.dropout(x, 0.3, Mode::Train, mask_rng);
    }));
  }
  {
    std::mt19937_64 init(1);
    gradnet::LstmLayer lstm(3, 4, init);
    run(15, [&](Tape& t, Var x) { return lstm.forward(t, x); }, {5, 3});
  }
  {
    training::LossWeights w;
    const Tensor truth = Tensor::vector1d(oracles::random_vec(rng, 16, 0.0, 1.0));
    run(16, [&](Tape& t, Var x) {
      return training::ae_loss(t, x, t.leaf(truth), w);
    }, {}, 0.05, 0.95);
    const Tensor other = Tensor::vector1d(oracles::random_vec(rng, 12));
    run(12, [&](Tape& t, Var x) { return t.pearson(x, t.leaf(other)); });
  }
  const double dt = secs_since(t0);
  std::ostringstream what;
  what << "finite-difference gradients, max rel err " << worst;
  report(4, worst <= 1e-5 && dt < 120.0, what.str(), dt);
}

// shared constructions for the targeting criteria
std::pair<Segment, Segment> structured_pair(std::mt19937_64& rng) {
  const std::size_t n = 256;
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  Segment a, b;
  a.samples.resize(n);
  b.samples.resize(n);
  const double pi = std::acos(-1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double base = std::sin(2.0 * pi * 5.0 * static_cast<double>(i) / 256.0);
    const double level = 0.05 + 1.5 * static_cast<double>(i) / static_cast<double>(n);
    a.samples[i] = base + 0.02 * noise(rng);
    b.samples[i] = base + level * noise(rng);
  }
  return {a, b};
}

std::pair<Segment, Segment> anomaly_pair(std::mt19937_64& rng) {
  const std::size_t n = 256;
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  Segment a, b;
  a.samples.resize(n);
  b.samples.resize(n);
  const double pi = std::acos(-1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 64 && i < 128) {
      const double ripple = std::sin(2.0 * pi * 8.0 * static_cast<double>(i) / 256.0);
      a.samples[i] = 0.001 * ripple;
      b.samples[i] = 0.1 * ripple;
    } else {
      a.samples[i] = noise(rng);
      b.samples[i] = 0.01 * noise(rng);
    }
  }
  return {a, b};
}

// ---- criterion 5: scale-targeting oracle equivalence ----
void criterion_5() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1005);
  const CalibrationStats cal = oracles::unit_calibration();
  bool ok = true;
  std::array<std::size_t, 3> seen = {0, 0, 0};
  for (int rep = 0; rep < 1000 && ok; ++rep) {
    Segment a, b;
    targeting::TargetingParams params;
    if (rep % 4 == 3) {
      // force the no-qualifying-window branch
      a = oracles::seg_of(oracles::random_vec(rng, 256));
      b = oracles::seg_of(oracles::random_vec(rng, 256));
      params.tau = 0.95;
    } else if (rep % 4 == 2) {
      std::tie(a, b) = anomaly_pair(rng);
    } else {
      std::tie(a, b) = structured_pair(rng);
    }
    const auto [out, outcome] =
        targeting::scale_targeting(a, b, params, cal, SnrLevel::Mid);
    const auto naive = oracles::naive_scale_targeting(a.samples, b.samples, params,
                                                      cal, SnrLevel::Mid);
    if (static_cast<int>(outcome.method) != naive.method) ok = false;
    ++seen[static_cast<std::size_t>(outcome.method)];
    for (std::size_t i = 0; i < out.size() && ok; ++i)
      if (std::fabs(out.samples[i] - naive.output[i]) > 1e-9) ok = false;
  }
  ok = ok && seen[0] > 0 && seen[1] > 0 && seen[2] > 0;
  const double dt = secs_since(t0);
  std::ostringstream what;
  what << "scale targeting matches the reference transcription on 1000 cases"
       << " (targeted " << seen[0] << ", standard " << seen[1] << ", anomaly "
       << seen[2] << ")";
  report(5, ok && dt < 30.0, what.str(), dt);
}

// ---- criterion 6: affine inversion ----
void criterion_6() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1006);
  const CalibrationStats cal = oracles::unit_calibration();
  targeting::TargetingParams params;
  bool ok = true;
  for (int rep = 0; rep < 100 && ok; ++rep) {
    const Segment b = oracles::seg_of(oracles::random_vec(rng, 128));
    const double scale = std::uniform_real_distribution<double>(0.2, 4.0)(rng);
    const double shift = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    Segment a = b;
    for (double& v : a.samples) v = scale * v + shift;
    const auto [out, outcome] =
        targeting::scale_targeting(a, b, params, cal, SnrLevel::Mid);
    if (outcome.method != targeting::RescaleMethod::Targeted) ok = false;
    for (std::size_t i = 0; i < b.size() && ok; ++i)
      if (std::fabs(out.samples[i] - b.samples[i]) > 1e-9) ok = false;
  }
  const double dt = secs_since(t0);
  report(6, ok && dt < 5.0, "A = a*B + b recovers B under targeted rescale", dt);
}

// ---- criterion 7: CC preservation ----
void criterion_7() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1007);
  const CalibrationStats cal = oracles::unit_calibration();
  targeting::TargetingParams params;
  bool ok = true;
  std::size_t targeted = 0;
  int rep = 0;
  while (targeted < 500 && rep < 2000 && ok) {
    ++rep;
    const auto [a, b] = structured_pair(rng);
    const Segment truth = oracles::seg_of(oracles::random_vec(rng, 256));
    const auto [out, outcome] =
        targeting::scale_targeting(a, b, params, cal, SnrLevel::Mid);
    if (outcome.method != targeting::RescaleMethod::Targeted) continue;
    ++targeted;
    if (std::fabs(pearson_cc(out, truth) - pearson_cc(a, truth)) > 1e-9) ok = false;
  }
  ok = ok && targeted >= 500;
  report(7, ok, "targeted rescale preserves CC with ground truth, 500 cases",
         secs_since(t0));
}

// ---- criterion 8: parameter budget ----
void criterion_8() {
  const auto t0 = Clock::now();
  const auto lc = models::build_lc_ensemble(1);
  const auto ae = models::build_autoencoder(1);
  const std::size_t total = models::count_params(lc) + models::count_params(ae);
  std::ostringstream what;
  what << "inference path " << total << " parameters < 400000";
  report(8, total < 400000, what.str(), secs_since(t0));
}

// interleaved per-level corpus so contiguous slices hold all classes
std::vector<training::TrainPair> interleaved_corpus(std::uint64_t seed,
                                                    std::size_t per_level) {
  const auto by_level = pipeline::build_corpus(seed, per_level);
  std::vector<training::TrainPair> out;
  out.reserve(by_level.size());
  for (std::size_t n = 0; n < per_level; ++n)
    for (std::size_t l = 0; l < 3; ++l)
      out.push_back(by_level[l * per_level + n]);
  return out;
}

// ---- criterion 9: meta-targeter desk-scale ----
models::LcEnsembleModel g_lc = models::build_lc_ensemble(2024);

void criterion_9() {
  const auto t0 = Clock::now();
  const std::size_t per_level = 334;  // 1002 segments -> 902 train / 100 test
  const auto corpus = interleaved_corpus(2024, per_level);
  std::vector<Segment> data;
  std::vector<SnrLevel> labels;
  for (const auto& tp : corpus) {
    data.push_back(tp.contaminated.mixture);
    labels.push_back(tp.level);
  }
  const training::MetaReport full =
      training::train_meta_targeter(g_lc, data, labels, 100, 2024, 100);

  // Ablations keep the already-trained base weights (base training is
  // seed-deterministic, so retraining them would reproduce the same
  // tensors) and refit a freshly initialized meta head over the masked
  // score vectors.
  bool ablation_ok = true;
  double worst_ablated = 1.0;
  for (int base = 0; base < 3; ++base) {
    auto ablated = g_lc;
    const auto fresh = models::build_lc_ensemble(2024);
    ablated.meta_fc1 = fresh.meta_fc1;
    ablated.meta_fc2 = fresh.meta_fc2;
    ablated.active = {true, true, true};
    const training::MetaReport r = training::train_meta_targeter(
        ablated, data, labels, 100, 2024, 100, base, /*train_bases=*/false);
    worst_ablated = std::min(worst_ablated, r.accuracy);
    if (r.accuracy > full.accuracy) ablation_ok = false;
  }
  const double dt = secs_since(t0);
  std::ostringstream what;
  what << "meta-targeter held-out accuracy " << full.accuracy
       << " (>= 0.95), ablated bases max-at " << worst_ablated
       << " (all <= full)";
  report(9, full.accuracy >= 0.95 && ablation_ok && dt < 600.0, what.str(), dt);
}

// ---- criterion 10: adversarial non-degradation ----
models::AutoencoderModel g_ae = models::build_autoencoder(2024);
CalibrationStats g_cal;

void criterion_10() {
  const auto t0 = Clock::now();
  const auto corpus = interleaved_corpus(2025, 40);       // 120 training pairs
  const auto heldout = interleaved_corpus(2026, 12);      // 36 held-out pairs

  training::TrainConfig cfg;
  cfg.seed = 2024;
  cfg.pretrain_epochs = 10;
  const auto trajectory = training::pretrain_autoencoder(g_ae, corpus, cfg);

  g_cal = training::compute_calibration(corpus, g_ae);
  const MetricsTriple pre = training::evaluate_pipeline_means(g_ae, heldout, g_cal);

  auto disc = models::build_discriminator(2031);
  const auto reports =
      training::adversarial_train(g_ae, disc, corpus, heldout, g_cal, cfg);
  const double post_cc = reports.back().heldout_cc;

  bool parity_ok = true;
  for (const auto& r : reports)
    if (!std::isfinite(r.gen_loss) || !std::isfinite(r.disc_loss))
      parity_ok = false;

  const double dt = secs_since(t0);
  std::ostringstream what;
  what << "held-out CC " << pre.cc << " -> " << post_cc
       << " after 5 adversarial cycles (loss " << trajectory.front() << " -> "
       << trajectory.back() << ")";
  report(10, post_cc >= pre.cc && parity_ok && dt < 900.0, what.str(), dt);
}

// ---- criteria 11 and 12: pipeline trends and determinism ----
void criteria_11_12() {
  const auto t0 = Clock::now();
  pipeline::ModelSet models{g_lc, g_ae};
  pipeline::PipelineConfig cfg;
  cfg.seed = 2030;
  cfg.params_per_level = {targeting::TargetingParams{},
                          targeting::TargetingParams{},
                          targeting::TargetingParams{}};
  cfg.segments_per_level = 100;

  const pipeline::BenchReport bench = pipeline::bench_run(models, g_cal, cfg);

  std::array<double, 3> mean_cc, mean_input_cc, fallback_rate;
  for (std::size_t l = 0; l < 3; ++l) {
    mean_cc[l] = pipeline::mean_v(bench.levels[l].cc);
    mean_input_cc[l] = pipeline::mean_v(bench.levels[l].input_cc);
    fallback_rate[l] =
        static_cast<double>(bench.levels[l].method_counts[1] +
                            bench.levels[l].method_counts[2]) /
        static_cast<double>(bench.levels[l].cc.size());
  }
  const bool monotone = mean_cc[0] < mean_cc[1] && mean_cc[1] < mean_cc[2];
  const bool non_degrading = mean_cc[2] >= mean_input_cc[2];
  const bool fallback_trend =
      fallback_rate[0] >= fallback_rate[1] && fallback_rate[1] >= fallback_rate[2];
  {
    std::ostringstream what;
    what << "mean CC " << mean_cc[0] << "/" << mean_cc[1] << "/" << mean_cc[2]
         << " (input " << mean_input_cc[0] << "/" << mean_input_cc[1] << "/"
         << mean_input_cc[2] << "), fallback rates " << fallback_rate[0] << "/"
         << fallback_rate[1] << "/" << fallback_rate[2];
    report(11, monotone && non_degrading && fallback_trend, what.str(),
           secs_since(t0));
  }

  // criterion 12: byte-identical CSVs under a fixed seed (latency excluded)
  const auto t1 = Clock::now();
  namespace fs = std::filesystem;
  const pipeline::BenchReport again = pipeline::bench_run(models, g_cal, cfg);
  report::report_emit(bench, "acceptance_bench_a");
  report::report_emit(again, "acceptance_bench_b");
  bool identical = true;
  for (const auto& entry : fs::directory_iterator("acceptance_bench_a")) {
    const std::string name = entry.path().filename().string();
    if (name == "latency.csv" || entry.path().extension() != ".csv") continue;
    std::ifstream fa(entry.path(), std::ios::binary);
    std::ifstream fb("acceptance_bench_b/" + name, std::ios::binary);
    std::ostringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    if (sa.str() != sb.str() || sa.str().empty()) identical = false;
  }
  fs::remove_all("acceptance_bench_a");
  fs::remove_all("acceptance_bench_b");
  report(12, identical, "two bench runs emit byte-identical CSVs (latency excluded)",
         secs_since(t1));
}

// ---- criterion 13: dataset-gated full-scale evaluation ----
void criterion_13() {
  const char* clean_env = std::getenv("TADA_CLEAN_CORPUS");
  const char* artifact_env = std::getenv("TADA_ARTIFACT_CORPUS");
  std::string clean_path = clean_env ? clean_env : "data/eeg_clean.csv";
  std::string artifact_path = artifact_env ? artifact_env : "data/emg_artifact.csv";
  if (!std::filesystem::exists(clean_path) ||
      !std::filesystem::exists(artifact_path)) {
    skip(13, "external corpus not present (set TADA_CLEAN_CORPUS / "
             "TADA_ARTIFACT_CORPUS)");
    return;
  }
  const auto t0 = Clock::now();
  const auto cleans = read_segments_csv(clean_path);
  const auto artifacts = read_segments_csv(artifact_path);

  std::vector<training::TrainPair> corpus, heldout;
  std::size_t i = 0;
  for (std::size_t n = 0; n + 1 < cleans.size(); ++n)
    for (SnrLevel level : kAllSnrLevels) {
      auto tp = training::make_train_pair(
          mix_at_snr(cleans[n], artifacts[i++ % artifacts.size()],
                     snr_db_of(level)),
          level);
      if (n % 10 == 9)
        heldout.push_back(std::move(tp));
      else
        corpus.push_back(std::move(tp));
    }

  auto ae = models::build_autoencoder(77);
  training::TrainConfig cfg;
  cfg.seed = 77;
  cfg.pretrain_epochs = 30;
  training::pretrain_autoencoder(ae, corpus, cfg);
  const CalibrationStats cal = training::compute_calibration(corpus, ae);
  auto disc = models::build_discriminator(78);
  training::adversarial_train(ae, disc, corpus, heldout, cal, cfg);

  double cc_sum = 0.0, trrmse_sum = 0.0;
  std::size_t count = 0;
  for (const auto& tp : heldout) {
    if (tp.level != SnrLevel::High) continue;
    const Segment raw = training::ae_infer(ae, tp.input);
    const auto [out, outcome] = targeting::scale_targeting(
        raw, tp.contaminated.mixture, targeting::TargetingParams{}, cal, tp.level);
    cc_sum += pearson_cc(out, tp.contaminated.clean);
    trrmse_sum += trrmse(out, tp.contaminated.clean);
    ++count;
  }
  const double cc = cc_sum / static_cast<double>(count);
  const double tr = trrmse_sum / static_cast<double>(count);
  std::ostringstream what;
  what << "external corpus at 2 dB: CC " << cc << " (>= 0.90), TRRMSE " << tr
       << " (<= 0.40)";
  report(13, cc >= 0.90 && tr <= 0.40, what.str(), secs_since(t0));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criteria_11_12();
  criterion_13();
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all active criteria passed" << std::endl;
  return 0;
}
