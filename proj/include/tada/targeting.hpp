#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tada/calibration.hpp"
#include "tada/errors.hpp"
#include "tada/metrics.hpp"
#include "tada/mixing.hpp"
#include "tada/segment.hpp"

namespace tada::targeting {

inline constexpr double kLogisticSteepness = 20.0;

struct TargetingParams {
  double tau = 0.8;               // correlation threshold, in (0,1)
  std::size_t window = 32;        // 125 ms at 256 Hz
  std::size_t fir_taps = 5;       // moving-average width, odd
  double anomaly_factor = 1.5;    // kappa, > 1

  void validate(std::size_t segment_len) const {
    if (!(tau > 0.0 && tau < 1.0)) throw Error("tau out of (0,1)");
    if (window < 2 || window > segment_len) throw WindowTooLarge();
    if (fir_taps % 2 == 0 || fir_taps < 1) throw InvalidTaps();
    if (!(anomaly_factor > 1.0)) throw Error("anomaly_factor must exceed 1");
  }
};

struct CorrelationSeries {
  std::vector<double> values;  // r_i for i = 0..L-w, each in [-1, 1]
};

enum class RescaleMethod { Targeted, StandardFallback, AnomalyFallback };

inline std::string to_string(RescaleMethod m) {
  switch (m) {
    case RescaleMethod::Targeted: return "targeted";
    case RescaleMethod::StandardFallback: return "standard_fallback";
    case RescaleMethod::AnomalyFallback: return "anomaly_fallback";
  }
  return "?";
}

struct RescaleOutcome {
  RescaleMethod method = RescaleMethod::StandardFallback;
  double scale = 1.0;
  double offset = 0.0;
  double omega_c = 0.0;
  double omega_p = 0.0;
  double omega_total = 0.0;
  double mu_c = 0.0;
  double mu_p = 0.0;
  double var_c = 0.0;
  double var_p = 0.0;
  std::size_t qualifying_windows = 0;
};

/// Sliding-window population Pearson correlations; zero-variance windows
/// yield r = 0. Inputs truncated to their common length.
inline CorrelationSeries running_correlation(const Segment& a, const Segment& b,
                                             std::size_t w) {
  const std::size_t len = std::min(a.size(), b.size());
  if (w < 2 || w > len) throw WindowTooLarge();
  CorrelationSeries out;
  out.values.reserve(len - w + 1);
  Segment wa, wb;
  wa.samples.resize(w);
  wb.samples.resize(w);
  for (std::size_t i = 0; i + w <= len; ++i) {
    for (std::size_t j = 0; j < w; ++j) {
      wa.samples[j] = a.samples[i + j];
      wb.samples[j] = b.samples[i + j];
    }
    out.values.push_back(pearson_cc(wa, wb));
  }
  return out;
}

/// Centered moving average with edge replication; taps = 1 recovers the
/// unsmoothed series.
inline CorrelationSeries fir_smooth(const CorrelationSeries& series,
                                    std::size_t taps) {
  if (taps % 2 == 0 || taps < 1) throw InvalidTaps();
  const std::size_t n = series.values.size();
  const long half = static_cast<long>(taps / 2);
  CorrelationSeries out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (long k = -half; k <= half; ++k) {
      long j = static_cast<long>(i) + k;
      j = std::clamp(j, 0L, static_cast<long>(n) - 1);
      acc += series.values[static_cast<std::size_t>(j)];
    }
    out.values[i] = acc / static_cast<double>(taps);
  }
  return out;
}

inline double logistic_weight(double r, double tau) {
  return 1.0 / (1.0 + std::exp(-kLogisticSteepness * (r - tau)));
}

/// Dataset-average fallback map: recenter on the segment's own mean,
/// apply the calibrated amplitude ratio and offset.
inline Segment standard_rescale(const Segment& a, const CalibrationStats& cal,
                                SnrLevel level) {
  const LevelCalibration& lc = cal.for_level(level);
  const double m = mean_of(a.samples);
  Segment out;
  out.rate_hz = a.rate_hz;
  out.samples.reserve(a.size());
  for (double v : a.samples)
    out.samples.push_back((v - m) * lc.amp_ratio + m + lc.mean_offset);
  return out;
}

/// Covariance-driven logistic scale targeting. A is the raw AE output,
/// B the original contaminated segment. Windows whose smoothed running
/// correlation exceeds tau contribute logistic-weighted window means;
/// the rescale maps A through the resulting affine transform. Falls back
/// to the calibrated standard rescale when no window qualifies or the
/// qualifying variance degenerates; anomaly filtration reverts rescales
/// that blow past the contaminated signal's amplitude envelope.
inline std::pair<Segment, RescaleOutcome> scale_targeting(
    const Segment& a_in, const Segment& b_in, const TargetingParams& params,
    const CalibrationStats& cal, SnrLevel level) {
  const std::size_t len = std::min(a_in.size(), b_in.size());
  params.validate(len);
  Segment a = a_in, b = b_in;
  a.samples.resize(len);
  b.samples.resize(len);

  const CorrelationSeries raw = running_correlation(a, b, params.window);
  const CorrelationSeries smoothed = fir_smooth(raw, params.fir_taps);

  RescaleOutcome outcome;
  std::vector<std::size_t> qualifying;
  for (std::size_t i = 0; i < smoothed.values.size(); ++i) {
    const double r = smoothed.values[i];
    if (!(r > params.tau)) continue;  // hard gate: r <= tau contributes nothing
    const double w = logistic_weight(r, params.tau);
    double mean_b = 0.0, mean_a = 0.0;
    for (std::size_t j = 0; j < params.window; ++j) {
      mean_b += b.samples[i + j];
      mean_a += a.samples[i + j];
    }
    mean_b /= static_cast<double>(params.window);
    mean_a /= static_cast<double>(params.window);
    outcome.omega_c += mean_b * w;
    outcome.omega_p += mean_a * w;
    outcome.omega_total += w;
    qualifying.push_back(i);
  }
  outcome.qualifying_windows = qualifying.size();

  auto standard = [&](RescaleMethod method) {
    Segment out = standard_rescale(a, cal, level);
    outcome.method = method;
    const LevelCalibration& lc = cal.for_level(level);
    outcome.scale = lc.amp_ratio;
    const double m = mean_of(a.samples);
    outcome.offset = m * (1.0 - lc.amp_ratio) + lc.mean_offset;
    return std::make_pair(std::move(out), outcome);
  };

  if (outcome.omega_total == 0.0) return standard(RescaleMethod::StandardFallback);

  outcome.mu_c = outcome.omega_c / outcome.omega_total;
  outcome.mu_p = outcome.omega_p / outcome.omega_total;

  // Unweighted population variance over all samples of qualifying
  // windows (overlaps counted per window), per Alg. 1's literal Var.
  double sum_b = 0.0, sum_a = 0.0;
  const double n_samples =
      static_cast<double>(qualifying.size() * params.window);
  for (std::size_t i : qualifying)
    for (std::size_t j = 0; j < params.window; ++j) {
      sum_b += b.samples[i + j];
      sum_a += a.samples[i + j];
    }
  const double mb = sum_b / n_samples, ma = sum_a / n_samples;
  for (std::size_t i : qualifying)
    for (std::size_t j = 0; j < params.window; ++j) {
      outcome.var_c += (b.samples[i + j] - mb) * (b.samples[i + j] - mb);
      outcome.var_p += (a.samples[i + j] - ma) * (a.samples[i + j] - ma);
    }
  outcome.var_c /= n_samples;
  outcome.var_p /= n_samples;

  if (outcome.var_p == 0.0) return standard(RescaleMethod::StandardFallback);

  const double scale = std::sqrt(outcome.var_c) / std::sqrt(outcome.var_p);
  Segment rescaled;
  rescaled.rate_hz = a.rate_hz;
  rescaled.samples.reserve(len);
  for (double v : a.samples)
    rescaled.samples.push_back((v - outcome.mu_p) * scale + outcome.mu_c);

  // Anomaly filtration: isolated stochastic noise alignment maps the
  // output to an extreme amplitude range; revert to the standard path.
  double max_r = 0.0, max_b = 0.0;
  for (double v : rescaled.samples) max_r = std::max(max_r, std::fabs(v));
  for (double v : b.samples) max_b = std::max(max_b, std::fabs(v));
  if (max_r > params.anomaly_factor * max_b)
    return standard(RescaleMethod::AnomalyFallback);

  outcome.method = RescaleMethod::Targeted;
  outcome.scale = scale;
  outcome.offset = outcome.mu_c - outcome.mu_p * scale;
  return {std::move(rescaled), outcome};
}

/// Standalone anomaly filtration (pass-through unless the rescaled
/// envelope exceeds kappa times the contaminated envelope).
inline Segment anomaly_filtration(const Segment& rescaled, const Segment& b,
                                  double kappa, const Segment& pre_rescale,
                                  const CalibrationStats& cal, SnrLevel level,
                                  bool* reverted = nullptr) {
  double max_r = 0.0, max_b = 0.0;
  for (double v : rescaled.samples) max_r = std::max(max_r, std::fabs(v));
  for (double v : b.samples) max_b = std::max(max_b, std::fabs(v));
  if (max_r > kappa * max_b) {
    if (reverted) *reverted = true;
    return standard_rescale(pre_rescale, cal, level);
  }
  if (reverted) *reverted = false;
  return rescaled;
}

}  // namespace tada::targeting
