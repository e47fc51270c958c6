#pragma once

#include <array>
#include <cmath>
#include <string>

#include "tada/errors.hpp"
#include "tada/segment.hpp"

namespace tada {

/// The three contamination levels the system is trained and evaluated on.
enum class SnrLevel { Low, Mid, High };

inline constexpr std::array<SnrLevel, 3> kAllSnrLevels = {SnrLevel::Low, SnrLevel::Mid,
                                                          SnrLevel::High};

inline double snr_db_of(SnrLevel level) {
  switch (level) {
    case SnrLevel::Low: return -7.0;
    case SnrLevel::Mid: return -2.5;
    case SnrLevel::High: return 2.0;
  }
  return 0.0;
}

inline std::string to_string(SnrLevel level) {
  switch (level) {
    case SnrLevel::Low: return "low";
    case SnrLevel::Mid: return "mid";
    case SnrLevel::High: return "high";
  }
  return "?";
}

inline std::size_t index_of(SnrLevel level) { return static_cast<std::size_t>(level); }

struct ContaminatedPair {
  Segment clean;     // ground truth x
  Segment artifact;  // noise source n
  double lambda = 0.0;
  Segment mixture;   // y = x + lambda * n
  double snr_db = 0.0;
};

/// SNR convention: SNR_dB = 10*log10(RMS(x) / RMS(lambda*n)).
inline double realized_snr_db(const ContaminatedPair& pair) {
  const double rx = rms_of(pair.clean.samples);
  const double rn = pair.lambda * rms_of(pair.artifact.samples);
  return 10.0 * std::log10(rx / rn);
}

inline ContaminatedPair mix_at_snr(const Segment& clean, const Segment& artifact,
                                   double snr_db) {
  if (clean.size() != artifact.size()) throw LengthMismatch();
  const double rx = rms_of(clean.samples);
  const double rn = rms_of(artifact.samples);
  if (rn == 0.0) throw DegenerateArtifact();
  if (rx == 0.0) throw DegenerateClean();
  ContaminatedPair pair;
  pair.clean = clean;
  pair.artifact = artifact;
  pair.snr_db = snr_db;
  pair.lambda = rx / (rn * std::pow(10.0, snr_db / 10.0));
  pair.mixture.rate_hz = clean.rate_hz;
  pair.mixture.samples.resize(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i)
    pair.mixture.samples[i] = clean.samples[i] + pair.lambda * artifact.samples[i];
  return pair;
}

}  // namespace tada
