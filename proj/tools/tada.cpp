// tada — command-line front end for the denoising pipeline.
//
// Subcommands: synth, mix, train-meta, train-ae, train-adv, calibrate,
// denoise, bench, report, params. Exit codes: 0 success, 1 validation
// error, 2 I/O error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tada/tada.hpp"

namespace {

using namespace tada;

struct GlobalOpts {
  std::string config_path;
  std::uint64_t seed = 42;
  std::string format = "csv";
  Config config;

  CorpusFormat corpus_format() const {
    return format == "bin" ? CorpusFormat::Bin : CorpusFormat::Csv;
  }
};

targeting::TargetingParams targeting_from_config(const Config& c) {
  targeting::TargetingParams p;
  p.tau = c.get_double("targeting.tau", p.tau);
  p.window = static_cast<std::size_t>(c.get_int("targeting.window",
                                                static_cast<long>(p.window)));
  p.fir_taps = static_cast<std::size_t>(
      c.get_int("targeting.fir_taps", static_cast<long>(p.fir_taps)));
  p.anomaly_factor = c.get_double("targeting.anomaly_factor", p.anomaly_factor);
  return p;
}

training::TrainConfig train_from_config(const Config& c, std::uint64_t seed) {
  training::TrainConfig t;
  t.seed = seed;
  t.lr = c.get_double("train.lr", t.lr);
  t.batch = static_cast<std::size_t>(c.get_int("train.batch",
                                               static_cast<long>(t.batch)));
  t.w_adv = c.get_double("train.w_adv", t.w_adv);
  t.cycles = static_cast<std::size_t>(c.get_int("train.cycles",
                                                static_cast<long>(t.cycles)));
  t.pretrain_epochs = static_cast<std::size_t>(
      c.get_int("train.pretrain_epochs", static_cast<long>(t.pretrain_epochs)));
  t.epochs_per_cycle_gen = static_cast<std::size_t>(c.get_int(
      "train.epochs_per_cycle_gen", static_cast<long>(t.epochs_per_cycle_gen)));
  t.epochs_per_cycle_disc = static_cast<std::size_t>(c.get_int(
      "train.epochs_per_cycle_disc", static_cast<long>(t.epochs_per_cycle_disc)));
  return t;
}

// Per-level contaminated corpus, interleaved across levels so any
// contiguous slice contains all three classes.
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

int cmd_synth(const GlobalOpts& g, const std::string& out_clean,
              const std::string& out_artifact, std::size_t count,
              const std::string& kind) {
  const auto cleans = synth_clean(g.seed, count);
  const auto artifacts = synth_artifact(
      g.seed + 1, count,
      kind == "spike" ? ArtifactKind::Spike : ArtifactKind::Continuous);
  write_segments(out_clean, cleans, g.corpus_format());
  write_segments(out_artifact, artifacts, g.corpus_format());
  std::cout << "wrote " << count << " clean -> " << out_clean << ", " << count
            << " artifact -> " << out_artifact << '\n';
  return 0;
}

int cmd_mix(const GlobalOpts& g, const std::string& clean_path,
            const std::string& artifact_path, const std::string& out_dir) {
  const auto cleans = read_segments(clean_path, g.corpus_format());
  const auto artifacts = read_segments(artifact_path, g.corpus_format());
  if (cleans.empty() || artifacts.empty()) throw EmptyCorpus();
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  for (SnrLevel level : kAllSnrLevels) {
    std::vector<Segment> mixtures, targets;
    for (std::size_t i = 0; i < cleans.size(); ++i) {
      const auto pair = mix_at_snr(cleans[i], artifacts[i % artifacts.size()],
                                   snr_db_of(level));
      mixtures.push_back(pair.mixture);
      targets.push_back(pair.clean);
    }
    const std::string ext = g.format == "bin" ? ".bin" : ".csv";
    write_segments(out_dir + "/mixture_" + to_string(level) + ext, mixtures,
                   g.corpus_format());
    write_segments(out_dir + "/clean_" + to_string(level) + ext, targets,
                   g.corpus_format());
  }
  std::cout << "wrote contaminated corpus (3 levels x " << cleans.size()
            << " segments) -> " << out_dir << '\n';
  return 0;
}

int cmd_train_meta(const GlobalOpts& g, const std::string& bundle,
                   std::size_t train_count, std::size_t heldout,
                   std::size_t epochs) {
  const std::size_t per_level = (train_count + heldout + 2) / 3;
  const auto corpus = interleaved_corpus(g.seed, per_level);
  std::vector<Segment> data;
  std::vector<SnrLevel> labels;
  for (const auto& tp : corpus) {
    data.push_back(tp.contaminated.mixture);
    labels.push_back(tp.level);
  }
  auto model = models::build_lc_ensemble(g.seed);
  const auto report =
      training::train_meta_targeter(model, data, labels, epochs, g.seed, heldout);
  std::filesystem::create_directories(bundle);
  gradnet::save_weights(bundle + "/lc.weights", model.entries());
  std::cout << "meta-targeter: heldout accuracy " << report.accuracy
            << ", mean loss " << report.mean_loss << ", epochs "
            << report.epochs_run << " -> " << bundle << "/lc.weights\n";
  return 0;
}

int cmd_train_ae(const GlobalOpts& g, const std::string& bundle,
                 std::size_t per_level, std::size_t epochs) {
  auto corpus = interleaved_corpus(g.seed, per_level);
  auto cfg = train_from_config(g.config, g.seed);
  cfg.pretrain_epochs = epochs;
  auto ae = models::build_autoencoder(g.seed);
  const auto trajectory = training::pretrain_autoencoder(ae, corpus, cfg);
  std::filesystem::create_directories(bundle);
  gradnet::save_weights(bundle + "/ae.weights", ae.entries());
  std::cout << "autoencoder: " << trajectory.size() << " epochs, final loss "
            << (trajectory.empty() ? 0.0 : trajectory.back()) << " -> "
            << bundle << "/ae.weights\n";
  return 0;
}

int cmd_calibrate(const GlobalOpts& g, const std::string& bundle,
                  std::size_t per_level) {
  auto ae = models::build_autoencoder(g.seed);
  gradnet::load_weights(bundle + "/ae.weights", ae.entries());
  const auto corpus = interleaved_corpus(g.seed, per_level);
  const auto cal = training::compute_calibration(corpus, ae);
  save_calibration(bundle + "/calibration.txt", cal);
  std::ofstream manifest(bundle + "/manifest.txt");
  if (!manifest) throw IoError("cannot write manifest");
  manifest << "bundle.arch_version = 1\n";
  manifest << "bundle.seed = " << g.seed << '\n';
  manifest << "bundle.normalization = minmax_unit_interval\n";
  std::cout << "calibration over " << corpus.size() << " pairs -> " << bundle
            << "/calibration.txt\n";
  return 0;
}

int cmd_train_adv(const GlobalOpts& g, const std::string& bundle,
                  std::size_t per_level, std::size_t cycles,
                  const std::string& log_path) {
  auto ae = models::build_autoencoder(g.seed);
  gradnet::load_weights(bundle + "/ae.weights", ae.entries());
  const auto cal = load_calibration(bundle + "/calibration.txt");
  auto disc = models::build_discriminator(g.seed + 7);
  auto cfg = train_from_config(g.config, g.seed);
  cfg.cycles = cycles;
  auto corpus = interleaved_corpus(g.seed, per_level);
  const std::size_t heldout_n = corpus.size() / 5;
  std::vector<training::TrainPair> heldout(corpus.end() - heldout_n, corpus.end());
  corpus.resize(corpus.size() - heldout_n);
  std::ofstream log;
  std::ostream* log_p = nullptr;
  if (!log_path.empty()) {
    log.open(log_path);
    if (!log) throw IoError("cannot write log: " + log_path);
    log << "cycle,epoch,gen_loss,disc_loss,heldout_cc\n";
    log_p = &log;
  }
  const auto reports =
      training::adversarial_train(ae, disc, corpus, heldout, cal, cfg, log_p);
  gradnet::save_weights(bundle + "/ae.weights", ae.entries());
  std::cout << "adversarial: " << reports.size() << " cycles, final heldout CC "
            << (reports.empty() ? 0.0 : reports.back().heldout_cc) << " -> "
            << bundle << "/ae.weights\n";
  return 0;
}

pipeline::PipelineConfig pipeline_config(const GlobalOpts& g,
                                         const std::string& bundle) {
  pipeline::PipelineConfig cfg;
  cfg.bundle_dir = bundle;
  cfg.seed = g.seed;
  const auto params = targeting_from_config(g.config);
  cfg.params_per_level = {params, params, params};
  return cfg;
}

int cmd_denoise(const GlobalOpts& g, const std::string& bundle,
                const std::string& in_path, const std::string& out_path) {
  pipeline::ModelSet models{models::build_lc_ensemble(g.seed),
                            models::build_autoencoder(g.seed)};
  CalibrationStats cal;
  pipeline::load_bundle(bundle, models, cal);
  const auto cfg = pipeline_config(g, bundle);
  const auto segments = read_segments(in_path, g.corpus_format());
  if (segments.empty()) throw EmptyCorpus();
  std::vector<Segment> outputs;
  outputs.reserve(segments.size());
  for (const Segment& s : segments)
    outputs.push_back(pipeline::denoise_segment(s, models, cal, cfg).output);
  write_segments(out_path, outputs, g.corpus_format());
  std::cout << "denoised " << segments.size() << " segments -> " << out_path
            << '\n';
  return 0;
}

int cmd_bench(const GlobalOpts& g, const std::string& bundle,
              const std::string& out_dir, std::size_t per_level,
              const std::string& clean_path, const std::string& artifact_path) {
  pipeline::ModelSet models{models::build_lc_ensemble(g.seed),
                            models::build_autoencoder(g.seed)};
  CalibrationStats cal;
  pipeline::load_bundle(bundle, models, cal);
  auto cfg = pipeline_config(g, bundle);
  cfg.segments_per_level = per_level;
  if (!clean_path.empty()) {
    cfg.source = pipeline::DatasetSource::FileCorpus;
    cfg.clean_path = clean_path;
    cfg.artifact_path = artifact_path;
  }
  const auto report = pipeline::bench_run(models, cal, cfg);
  report::report_emit(report, out_dir);
  std::cout << "bench: " << report.total_segments() << " segments, mean CC";
  for (SnrLevel level : kAllSnrLevels)
    std::cout << ' ' << to_string(level) << '='
              << pipeline::mean_v(report.levels[index_of(level)].cc);
  std::cout << " -> " << out_dir << '\n';
  return 0;
}

int cmd_report(const std::string& in_dir, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::size_t plotted = 0;
  for (SnrLevel level : kAllSnrLevels) {
    const std::string path =
        in_dir + "/distribution_" + to_string(level) + ".csv";
    std::ifstream is(path);
    if (!is) continue;
    std::string line;
    std::getline(is, line);  // header: cc,trrmse,srrmse,input_cc
    std::vector<double> cc, trrmse, srrmse;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::istringstream row(line);
      std::string cell;
      std::getline(row, cell, ',');
      cc.push_back(std::stod(cell));
      std::getline(row, cell, ',');
      trrmse.push_back(std::stod(cell));
      std::getline(row, cell, ',');
      srrmse.push_back(std::stod(cell));
    }
    const char* names[3] = {"cc", "trrmse", "srrmse"};
    const std::vector<double>* cols[3] = {&cc, &trrmse, &srrmse};
    for (int m = 0; m < 3; ++m) {
      report::detail::write_histogram_svg(
          out_dir + "/hist_" + names[m] + "_" + to_string(level) + ".svg",
          report::detail::histogram(*cols[m]),
          std::string(names[m]) + " @ " + to_string(level) + " SNR");
      ++plotted;
    }
  }
  if (plotted == 0) throw IoError("no distribution CSVs found in " + in_dir);
  std::cout << "wrote " << plotted << " SVG plots -> " << out_dir << '\n';
  return 0;
}

int cmd_params(const GlobalOpts& g, const std::string& bundle) {
  pipeline::ModelSet models{models::build_lc_ensemble(g.seed),
                            models::build_autoencoder(g.seed)};
  if (!bundle.empty()) {
    CalibrationStats cal;
    pipeline::load_bundle(bundle, models, cal);
  }
  const auto disc = models::build_discriminator(g.seed);
  const std::size_t lc = models.lc.param_count();
  const std::size_t ae = models.ae.param_count();
  std::cout << "lc_ensemble " << lc << '\n';
  std::cout << "autoencoder " << ae << '\n';
  std::cout << "discriminator(train-only) " << disc.param_count() << '\n';
  std::cout << "inference_total " << lc + ae << '\n';
  if (lc + ae >= 400000) {
    std::cerr << "error: inference path exceeds parameter budget\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TADA signal denoising pipeline"};
  app.require_subcommand(1);
  app.fallthrough();  // accept the global flags after a subcommand too

  GlobalOpts g;
  app.add_option("--config", g.config_path, "flat key-value config file");
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--format", g.format, "corpus file format")
      ->check(CLI::IsMember({"csv", "bin"}));

  std::string out_clean = "clean.csv", out_artifact = "artifact.csv";
  std::size_t count = 100;
  std::string kind = "continuous";
  auto* synth = app.add_subcommand("synth", "emit a synthetic proxy corpus");
  synth->add_option("--out-clean", out_clean, "clean output file");
  synth->add_option("--out-artifact", out_artifact, "artifact output file");
  synth->add_option("--count", count, "segments per file");
  synth->add_option("--artifact-kind", kind, "artifact family")
      ->check(CLI::IsMember({"continuous", "spike"}));

  std::string clean_path, artifact_path, out_dir = "mixed";
  auto* mix = app.add_subcommand("mix", "build a contaminated corpus at all levels");
  mix->add_option("--clean", clean_path, "clean corpus file")->required();
  mix->add_option("--artifact", artifact_path, "artifact corpus file")->required();
  mix->add_option("--out-dir", out_dir, "output directory");

  std::string bundle = "bundle";
  std::size_t train_count = 900, heldout = 100, epochs = 100;
  auto* tmeta = app.add_subcommand("train-meta", "train the LC meta-targeter");
  tmeta->add_option("--bundle", bundle, "model bundle directory");
  tmeta->add_option("--train", train_count, "training segments");
  tmeta->add_option("--heldout", heldout, "held-out segments");
  tmeta->add_option("--epochs", epochs, "epoch cap");

  std::size_t per_level = 40, ae_epochs = 10;
  auto* tae = app.add_subcommand("train-ae", "pretrain the autoencoder");
  tae->add_option("--bundle", bundle, "model bundle directory");
  tae->add_option("--per-level", per_level, "training pairs per SNR level");
  tae->add_option("--epochs", ae_epochs, "pretraining epochs");

  auto* cal_cmd = app.add_subcommand("calibrate", "compute rescale calibration");
  cal_cmd->add_option("--bundle", bundle, "model bundle directory");
  cal_cmd->add_option("--per-level", per_level, "pairs per SNR level");

  std::size_t cycles = 5;
  std::string log_path;
  auto* tadv = app.add_subcommand("train-adv", "adversarial generator/discriminator cycles");
  tadv->add_option("--bundle", bundle, "model bundle directory");
  tadv->add_option("--per-level", per_level, "pairs per SNR level");
  tadv->add_option("--cycles", cycles, "adversarial cycles");
  tadv->add_option("--log", log_path, "CSV training log");

  std::string in_path, out_path = "denoised.csv";
  auto* den = app.add_subcommand("denoise", "denoise a segment file");
  den->add_option("--bundle", bundle, "model bundle directory");
  den->add_option("--in", in_path, "input segment file")->required();
  den->add_option("--out", out_path, "output segment file");

  std::string bench_dir = "bench", bench_clean, bench_artifact;
  std::size_t bench_per_level = 100;
  auto* bench = app.add_subcommand("bench", "run the benchmark harness");
  bench->add_option("--bundle", bundle, "model bundle directory");
  bench->add_option("--out-dir", bench_dir, "report output directory");
  bench->add_option("--per-level", bench_per_level, "segments per SNR level");
  bench->add_option("--clean", bench_clean, "clean corpus file (file-backed run)");
  bench->add_option("--artifact", bench_artifact, "artifact corpus file");

  std::string rep_in = "bench", rep_out = "plots";
  auto* rep = app.add_subcommand("report", "regenerate SVG plots from bench CSVs");
  rep->add_option("--in-dir", rep_in, "bench output directory");
  rep->add_option("--out-dir", rep_out, "plot output directory");

  std::string params_bundle;
  auto* par = app.add_subcommand("params", "print the parameter audit");
  par->add_option("--bundle", params_bundle, "model bundle directory (optional)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!g.config_path.empty()) g.config = Config::from_file(g.config_path);
    if (synth->parsed()) return cmd_synth(g, out_clean, out_artifact, count, kind);
    if (mix->parsed()) return cmd_mix(g, clean_path, artifact_path, out_dir);
    if (tmeta->parsed())
      return cmd_train_meta(g, bundle, train_count, heldout, epochs);
    if (tae->parsed()) return cmd_train_ae(g, bundle, per_level, ae_epochs);
    if (cal_cmd->parsed()) return cmd_calibrate(g, bundle, per_level);
    if (tadv->parsed())
      return cmd_train_adv(g, bundle, per_level, cycles, log_path);
    if (den->parsed()) return cmd_denoise(g, bundle, in_path, out_path);
    if (bench->parsed())
      return cmd_bench(g, bundle, bench_dir, bench_per_level, bench_clean,
                       bench_artifact);
    if (rep->parsed()) return cmd_report(rep_in, rep_out);
    if (par->parsed()) return cmd_params(g, params_bundle);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
