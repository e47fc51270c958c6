#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "tada/errors.hpp"
#include "tada/fft.hpp"
#include "tada/segment.hpp"

namespace tada {

/// Squared DFT magnitudes, DC through Nyquist. Raw (unwindowed,
/// unnormalized); SRRMSE is a ratio so scale cancels.
struct PowerSpectrum {
  std::vector<double> bins;
  std::size_t size() const { return bins.size(); }
};

inline PowerSpectrum power_spectrum(const Segment& seg) {
  const std::size_t n = seg.size();
  if (!detail::is_power_of_two(n)) throw NonPowerOfTwoLength();
  std::vector<std::complex<double>> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = {seg.samples[i], 0.0};
  detail::fft_radix2(a);
  PowerSpectrum ps;
  ps.bins.resize(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) ps.bins[k] = std::norm(a[k]);
  return ps;
}

/// Population Pearson correlation. Zero variance on either side yields 0:
/// flat windows carry no alignment evidence.
inline double pearson_cc(const Segment& a, const Segment& b) {
  if (a.size() != b.size()) throw LengthMismatch();
  const std::size_t n = a.size();
  if (n < 2) throw LengthMismatch("pearson_cc: need length >= 2");
  const double ma = mean_of(a.samples);
  const double mb = mean_of(b.samples);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a.samples[i] - ma;
    const double db = b.samples[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

/// Temporal relative RMSE: RMS(estimate - truth) / RMS(truth).
inline double trrmse(const Segment& estimate, const Segment& truth) {
  if (estimate.size() != truth.size()) throw LengthMismatch();
  const double denom = rms_of(truth.samples);
  if (denom == 0.0) throw DegenerateTruth();
  std::vector<double> resid(estimate.size());
  for (std::size_t i = 0; i < estimate.size(); ++i)
    resid[i] = estimate.samples[i] - truth.samples[i];
  return rms_of(resid) / denom;
}

/// Spectral relative RMSE: trrmse over power-spectrum bins.
inline double srrmse(const Segment& estimate, const Segment& truth) {
  if (estimate.size() != truth.size()) throw LengthMismatch();
  const PowerSpectrum pe = power_spectrum(estimate);
  const PowerSpectrum pt = power_spectrum(truth);
  const double denom = rms_of(pt.bins);
  if (denom == 0.0) throw DegenerateTruth();
  std::vector<double> resid(pe.bins.size());
  for (std::size_t i = 0; i < pe.bins.size(); ++i) resid[i] = pe.bins[i] - pt.bins[i];
  return rms_of(resid) / denom;
}

struct MetricsTriple {
  double cc = 0.0;
  double trrmse = 0.0;
  double srrmse = 0.0;
};

inline MetricsTriple compute_metrics(const Segment& estimate, const Segment& truth) {
  return {pearson_cc(estimate, truth), trrmse(estimate, truth), srrmse(estimate, truth)};
}

}  // namespace tada
