#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tada/calibration.hpp"
#include "tada/metrics.hpp"
#include "tada/mixing.hpp"
#include "tada/models.hpp"
#include "tada/segment_io.hpp"
#include "tada/synth.hpp"
#include "tada/targeting.hpp"
#include "tada/training.hpp"
#include "tada/weights.hpp"

namespace tada::pipeline {

enum class DatasetSource { SyntheticProxy, FileCorpus };

struct PipelineConfig {
  std::string bundle_dir;  // ae.weights, lc.weights, calibration.txt, manifest.txt
  std::array<targeting::TargetingParams, 3> params_per_level;
  std::uint64_t seed = 0;
  DatasetSource source = DatasetSource::SyntheticProxy;
  std::string clean_path;     // FileCorpus only
  std::string artifact_path;  // FileCorpus only
  std::size_t segments_per_level = 100;
};

struct DenoiseResult {
  Segment output;
  SnrLevel predicted = SnrLevel::Mid;
  targeting::RescaleOutcome outcome;
  double meta_us = 0.0;
  double ae_us = 0.0;
  double rescale_us = 0.0;
};

struct ModelSet {
  models::LcEnsembleModel lc;
  models::AutoencoderModel ae;
};

inline void save_bundle(const std::string& dir, ModelSet& models,
                        const CalibrationStats& cal, std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  gradnet::save_weights(dir + "/ae.weights", models.ae.entries());
  gradnet::save_weights(dir + "/lc.weights", models.lc.entries());
  save_calibration(dir + "/calibration.txt", cal);
  std::ofstream manifest(dir + "/manifest.txt");
  if (!manifest) throw IoError("cannot write manifest");
  manifest << "bundle.arch_version = 1\n";
  manifest << "bundle.seed = " << seed << '\n';
  manifest << "bundle.normalization = minmax_unit_interval\n";
}

inline void load_bundle(const std::string& dir, ModelSet& models,
                        CalibrationStats& cal) {
  namespace fs = std::filesystem;
  if (!fs::exists(dir + "/ae.weights") || !fs::exists(dir + "/lc.weights") ||
      !fs::exists(dir + "/calibration.txt"))
    throw MissingModels("incomplete model bundle in " + dir);
  gradnet::load_weights(dir + "/ae.weights", models.ae.entries());
  gradnet::load_weights(dir + "/lc.weights", models.lc.entries());
  cal = load_calibration(dir + "/calibration.txt");
}

/// Full inference chain: meta-target -> normalize -> AE -> scale-target.
/// The AE consumes the normalized mixture; scale targeting correlates the
/// raw AE output against the original (unnormalized) mixture.
inline DenoiseResult denoise_segment(const Segment& mixture, ModelSet& models,
                                     const CalibrationStats& cal,
                                     const PipelineConfig& config) {
  using clock = std::chrono::steady_clock;
  DenoiseResult result;

  const auto t0 = clock::now();
  const MinMaxNorm norm = normalize_minmax(mixture);
  result.predicted = training::predict_level(models.lc, norm.normalized);
  const auto t1 = clock::now();

  const Segment raw = training::ae_infer(models.ae, norm.normalized);
  const auto t2 = clock::now();

  auto [output, outcome] = targeting::scale_targeting(
      raw, mixture, config.params_per_level[index_of(result.predicted)], cal,
      result.predicted);
  const auto t3 = clock::now();

  result.output = std::move(output);
  result.outcome = outcome;
  const auto us = [](auto a, auto b) {
    return std::chrono::duration<double, std::micro>(b - a).count();
  };
  result.meta_us = us(t0, t1);
  result.ae_us = us(t1, t2);
  result.rescale_us = us(t2, t3);
  return result;
}

struct LevelStats {
  std::vector<double> cc, trrmse, srrmse;
  std::vector<double> input_cc;
  std::array<std::size_t, 3> method_counts = {0, 0, 0};  // per RescaleMethod
};

struct BenchReport {
  std::array<LevelStats, 3> levels;
  double meta_us_total = 0.0;
  double ae_us_total = 0.0;
  double rescale_us_total = 0.0;
  std::size_t param_count = 0;

  std::size_t total_segments() const {
    std::size_t n = 0;
    for (const auto& l : levels) n += l.cc.size();
    return n;
  }
};

inline double mean_v(const std::vector<double>& v) { return mean_of(v); }

inline double median_v(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double std_v(const std::vector<double>& v) { return stddev_of(v); }

/// Benchmark corpus: per-level contaminated pairs. The synthetic proxy
/// alternates continuous and spike artifacts.
inline std::vector<training::TrainPair> build_corpus(std::uint64_t seed,
                                                     std::size_t per_level) {
  if (per_level == 0) throw EmptyCorpus();
  const auto cleans = synth_clean(seed, per_level * 3);
  const auto cont = synth_artifact(seed + 1, per_level * 3, ArtifactKind::Continuous);
  const auto spike = synth_artifact(seed + 2, per_level * 3, ArtifactKind::Spike);
  std::vector<training::TrainPair> corpus;
  corpus.reserve(per_level * 3);
  std::size_t i = 0;
  for (SnrLevel level : kAllSnrLevels) {
    for (std::size_t n = 0; n < per_level; ++n, ++i) {
      const Segment& artifact = (i % 2 == 0) ? cont[i] : spike[i];
      corpus.push_back(training::make_train_pair(
          mix_at_snr(cleans[i], artifact, snr_db_of(level)), level));
    }
  }
  return corpus;
}

inline std::vector<training::TrainPair> build_corpus_from_files(
    const PipelineConfig& config) {
  const auto cleans = read_segments_csv(config.clean_path);
  const auto artifacts = read_segments_csv(config.artifact_path);
  if (cleans.empty() || artifacts.empty()) throw EmptyCorpus();
  std::vector<training::TrainPair> corpus;
  std::size_t i = 0;
  for (SnrLevel level : kAllSnrLevels)
    for (std::size_t n = 0; n < config.segments_per_level; ++n, ++i)
      corpus.push_back(training::make_train_pair(
          mix_at_snr(cleans[i % cleans.size()], artifacts[i % artifacts.size()],
                     snr_db_of(level)),
          level));
  return corpus;
}

inline BenchReport bench_run(ModelSet& models, const CalibrationStats& cal,
                             const PipelineConfig& config) {
  const std::vector<training::TrainPair> corpus =
      config.source == DatasetSource::SyntheticProxy
          ? build_corpus(config.seed, config.segments_per_level)
          : build_corpus_from_files(config);
  if (corpus.empty()) throw EmptyCorpus();
  BenchReport report;
  report.param_count = models.lc.param_count() + models.ae.param_count();
  for (const training::TrainPair& tp : corpus) {
    const DenoiseResult r = denoise_segment(tp.contaminated.mixture, models, cal,
                                            config);
    LevelStats& stats = report.levels[index_of(tp.level)];
    const MetricsTriple m = compute_metrics(r.output, tp.contaminated.clean);
    stats.cc.push_back(m.cc);
    stats.trrmse.push_back(m.trrmse);
    stats.srrmse.push_back(m.srrmse);
    stats.input_cc.push_back(pearson_cc(tp.contaminated.mixture, tp.contaminated.clean));
    ++stats.method_counts[static_cast<std::size_t>(r.outcome.method)];
    report.meta_us_total += r.meta_us;
    report.ae_us_total += r.ae_us;
    report.rescale_us_total += r.rescale_us;
  }
  return report;
}

}  // namespace tada::pipeline
