#pragma once

#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "tada/errors.hpp"
#include "tada/segment.hpp"

namespace tada {

enum class ArtifactKind { Continuous, Spike };

/// Burst placement for one spike-artifact segment; used by the
/// energy-localization checks in tests.
struct SpikeMask {
  std::vector<std::pair<std::size_t, std::size_t>> bursts;  // [start, end)
};

namespace detail {

inline double uni(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace detail

/// Dataset-free proxy for clean EEG: 5-12 sinusoids in 1-40 Hz with
/// 1/f-weighted amplitudes and random phases, plus faint broadband noise.
inline std::vector<Segment> synth_clean(std::uint64_t seed, std::size_t n,
                                        std::size_t length = kSegmentLength) {
  if (n < 1) throw InvalidCount();
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull);
  std::vector<Segment> out;
  out.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    const int ncomp = std::uniform_int_distribution<int>(5, 12)(rng);
    std::vector<double> freq(ncomp), phase(ncomp), amp(ncomp);
    for (int c = 0; c < ncomp; ++c) {
      freq[c] = detail::uni(rng, 1.0, 40.0);
      phase[c] = detail::uni(rng, 0.0, 2.0 * std::numbers::pi);
      amp[c] = detail::uni(rng, 0.5, 1.5) / freq[c];  // 1/f weighting
    }
    Segment seg;
    seg.samples.resize(length);
    // Broadband floor sized well below the sinusoid stack.
    std::normal_distribution<double> broadband(0.0, 0.01);
    for (std::size_t i = 0; i < length; ++i) {
      const double t = static_cast<double>(i) / kDefaultRateHz;
      double v = 0.0;
      for (int c = 0; c < ncomp; ++c)
        v += amp[c] * std::sin(2.0 * std::numbers::pi * freq[c] * t + phase[c]);
      seg.samples[i] = v + broadband(rng);
    }
    const double m = mean_of(seg.samples);
    for (double& v : seg.samples) v -= m;
    out.push_back(std::move(seg));
  }
  return out;
}

inline std::vector<Segment> synth_artifact(std::uint64_t seed, std::size_t n,
                                           ArtifactKind kind,
                                           std::vector<SpikeMask>* masks = nullptr,
                                           std::size_t length = kSegmentLength) {
  if (n < 1) throw InvalidCount();
  std::mt19937_64 rng(seed * 0xBF58476D1CE4E5B9ull + 0x94D049BB133111EBull +
                      (kind == ArtifactKind::Spike ? 1 : 0));
  std::vector<Segment> out;
  out.reserve(n);
  if (masks) masks->clear();
  for (std::size_t s = 0; s < n; ++s) {
    Segment seg;
    seg.samples.assign(length, 0.0);
    if (kind == ArtifactKind::Continuous) {
      // Broadband 45-120 Hz interference spanning the whole segment,
      // kept above the clean band so mixtures stay band-separable.
      const int ncomp = 40;
      for (int c = 0; c < ncomp; ++c) {
        const double f = detail::uni(rng, 45.0, 120.0);
        const double ph = detail::uni(rng, 0.0, 2.0 * std::numbers::pi);
        const double a = detail::uni(rng, 0.5, 1.5);
        for (std::size_t i = 0; i < length; ++i) {
          const double t = static_cast<double>(i) / kDefaultRateHz;
          seg.samples[i] += a * std::sin(2.0 * std::numbers::pi * f * t + ph);
        }
      }
      if (masks) masks->push_back({});
    } else {
      // 1-3 short high-amplitude bursts over a near-zero baseline.
      std::normal_distribution<double> baseline(0.0, 1e-3);
      for (std::size_t i = 0; i < length; ++i) seg.samples[i] = baseline(rng);
      SpikeMask mask;
      const int nburst = std::uniform_int_distribution<int>(1, 3)(rng);
      for (int b = 0; b < nburst; ++b) {
        const std::size_t blen =
            std::uniform_int_distribution<std::size_t>(16, 51)(rng);  // <= 0.2 s
        const std::size_t start =
            std::uniform_int_distribution<std::size_t>(0, length - blen)(rng);
        const double f = detail::uni(rng, 45.0, 115.0);
        const double ph = detail::uni(rng, 0.0, 2.0 * std::numbers::pi);
        const double a = detail::uni(rng, 5.0, 12.0);
        for (std::size_t i = 0; i < blen; ++i) {
          const double t = static_cast<double>(start + i) / kDefaultRateHz;
          const double hann =
              0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                    static_cast<double>(blen - 1)));
          seg.samples[start + i] +=
              a * hann * std::sin(2.0 * std::numbers::pi * f * t + ph);
        }
        mask.bursts.emplace_back(start, start + blen);
      }
      if (masks) masks->push_back(std::move(mask));
    }
    out.push_back(std::move(seg));
  }
  return out;
}

}  // namespace tada
