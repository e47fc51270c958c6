#pragma once

#include <cmath>
#include <cstddef>
#include <tuple>
#include <vector>

#include "tada/errors.hpp"

namespace tada {

inline constexpr std::size_t kSegmentLength = 512;
inline constexpr double kDefaultRateHz = 256.0;

/// One real-valued time-series window. Pipeline-facing segments are
/// 512 samples at 256 Hz; utility code may hold other lengths.
struct Segment {
  std::vector<double> samples;
  double rate_hz = kDefaultRateHz;

  Segment() = default;
  explicit Segment(std::vector<double> s, double rate = kDefaultRateHz)
      : samples(std::move(s)), rate_hz(rate) {}

  std::size_t size() const { return samples.size(); }
  double& operator[](std::size_t i) { return samples[i]; }
  double operator[](std::size_t i) const { return samples[i]; }

  bool finite() const {
    for (double v : samples)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

/// Population (1/N) RMS.
inline double rms_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return v.empty() ? 0.0 : std::sqrt(s / static_cast<double>(v.size()));
}

/// Population standard deviation.
inline double stddev_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return v.empty() ? 0.0 : std::sqrt(s / static_cast<double>(v.size()));
}

struct MinMaxNorm {
  Segment normalized;
  double offset = 0.0;  // the original minimum
  double span = 1.0;    // max - min
};

/// Maps a segment onto [0,1]; invertible through offset/span.
inline MinMaxNorm normalize_minmax(const Segment& seg) {
  double lo = seg.samples.empty() ? 0.0 : seg.samples[0];
  double hi = lo;
  for (double v : seg.samples) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi - lo;
  if (!(span > 0.0)) throw DegenerateSpan();
  MinMaxNorm out;
  out.offset = lo;
  out.span = span;
  out.normalized.rate_hz = seg.rate_hz;
  out.normalized.samples.reserve(seg.size());
  for (double v : seg.samples) out.normalized.samples.push_back((v - lo) / span);
  return out;
}

inline Segment denormalize_minmax(const Segment& seg, double offset, double span) {
  Segment out;
  out.rate_hz = seg.rate_hz;
  out.samples.reserve(seg.size());
  for (double v : seg.samples) out.samples.push_back(v * span + offset);
  return out;
}

}  // namespace tada
