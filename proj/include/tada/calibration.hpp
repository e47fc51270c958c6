#pragma once

#include <array>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "tada/errors.hpp"
#include "tada/mixing.hpp"

namespace tada {

struct LevelCalibration {
  double mean_offset = 0.0;  // mean(truth) - mean(raw AE output), dataset average
  double amp_ratio = 1.0;    // std(truth) / std(raw AE output), dataset average
};

/// Fallback-rescale statistics, computed only from training data.
struct CalibrationStats {
  std::array<LevelCalibration, 3> levels;
  std::array<bool, 3> present = {false, false, false};
  double p99_amplitude = 0.0;  // 99th percentile |truth|

  const LevelCalibration& for_level(SnrLevel level) const {
    if (!present[index_of(level)]) throw MissingCalibration();
    return levels[index_of(level)];
  }
};

inline void save_calibration(const std::string& path, const CalibrationStats& cal) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for write: " + path);
  os << std::setprecision(17);
  for (SnrLevel level : kAllSnrLevels) {
    const auto i = index_of(level);
    if (!cal.present[i]) continue;
    os << "calibration." << to_string(level) << ".mean_offset = "
       << cal.levels[i].mean_offset << '\n';
    os << "calibration." << to_string(level) << ".amp_ratio = "
       << cal.levels[i].amp_ratio << '\n';
  }
  os << "calibration.p99_amplitude = " << cal.p99_amplitude << '\n';
  if (!os) throw IoError("write failed: " + path);
}

inline CalibrationStats load_calibration(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open: " + path);
  CalibrationStats cal;
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    const double value = std::stod(line.substr(eq + 1));
    for (SnrLevel level : kAllSnrLevels) {
      const auto i = index_of(level);
      if (key == "calibration." + to_string(level) + ".mean_offset") {
        cal.levels[i].mean_offset = value;
        cal.present[i] = true;
      } else if (key == "calibration." + to_string(level) + ".amp_ratio") {
        cal.levels[i].amp_ratio = value;
        cal.present[i] = true;
      }
    }
    if (key == "calibration.p99_amplitude") cal.p99_amplitude = value;
  }
  return cal;
}

}  // namespace tada
