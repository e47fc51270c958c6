#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "tada/errors.hpp"
#include "tada/pipeline.hpp"

namespace tada::report {

namespace detail {

struct Histogram {
  std::vector<std::size_t> counts;
  double lo = 0.0, hi = 1.0;
};

inline Histogram histogram(const std::vector<double>& values, std::size_t bins = 16) {
  Histogram h;
  h.counts.assign(bins, 0);
  if (values.empty()) return h;
  h.lo = *std::min_element(values.begin(), values.end());
  h.hi = *std::max_element(values.begin(), values.end());
  const double span = h.hi > h.lo ? h.hi - h.lo : 1.0;
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - h.lo) / span * static_cast<double>(bins));
    h.counts[std::min(b, bins - 1)] += 1;
  }
  return h;
}

inline void write_histogram_svg(const std::string& path, const Histogram& h,
                                const std::string& title) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for write: " + path);
  const int width = 480, height = 280, margin = 40;
  std::size_t max_count = 1;
  for (std::size_t c : h.counts) max_count = std::max(max_count, c);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\">\n";
  os << "<text x=\"" << margin << "\" y=\"20\" font-size=\"14\">" << title
     << "</text>\n";
  const double plot_w = width - 2.0 * margin;
  const double plot_h = height - 2.0 * margin;
  const double bar_w = plot_w / static_cast<double>(h.counts.size());
  os << std::setprecision(6);
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double bh = plot_h * static_cast<double>(h.counts[i]) /
                      static_cast<double>(max_count);
    os << "<rect x=\"" << margin + bar_w * static_cast<double>(i) << "\" y=\""
       << margin + plot_h - bh << "\" width=\"" << bar_w * 0.9 << "\" height=\""
       << bh << "\" fill=\"#4477aa\"/>\n";
  }
  os << "<text x=\"" << margin << "\" y=\"" << height - 10
     << "\" font-size=\"11\">" << h.lo << "</text>\n";
  os << "<text x=\"" << width - margin - 40 << "\" y=\"" << height - 10
     << "\" font-size=\"11\">" << h.hi << "</text>\n";
  os << "</svg>\n";
}

}  // namespace detail

/// Writes summary.csv (Table-style 3 metrics x 3 levels), fallbacks.csv,
/// latency.csv, per-level per-segment distributions, and histogram SVGs.
/// Wall-clock figures live only in latency.csv so every other artifact is
/// byte-stable under a fixed seed.
inline void report_emit(const pipeline::BenchReport& report,
                        const std::string& out_dir) {
  if (report.total_segments() == 0) throw EmptyCorpus("empty bench report");
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  {
    std::ofstream os(out_dir + "/summary.csv");
    if (!os) throw IoError("cannot write summary.csv");
    os << std::setprecision(10);
    os << "metric,low_-7dB,mid_-2.5dB,high_2dB\n";
    const char* names[3] = {"cc", "trrmse", "srrmse"};
    for (int m = 0; m < 3; ++m) {
      os << names[m];
      for (const auto& l : report.levels) {
        const std::vector<double>& v =
            m == 0 ? l.cc : (m == 1 ? l.trrmse : l.srrmse);
        os << ',' << pipeline::mean_v(v);
      }
      os << '\n';
    }
  }

  {
    std::ofstream os(out_dir + "/fallbacks.csv");
    if (!os) throw IoError("cannot write fallbacks.csv");
    os << "level,targeted,standard_fallback,anomaly_fallback,total\n";
    for (SnrLevel level : kAllSnrLevels) {
      const auto& l = report.levels[index_of(level)];
      os << to_string(level) << ',' << l.method_counts[0] << ','
         << l.method_counts[1] << ',' << l.method_counts[2] << ',' << l.cc.size()
         << '\n';
    }
  }

  {
    std::ofstream os(out_dir + "/latency.csv");
    if (!os) throw IoError("cannot write latency.csv");
    os << std::setprecision(10);
    const double total =
        report.meta_us_total + report.ae_us_total + report.rescale_us_total;
    os << "stage,total_us,share\n";
    os << "meta," << report.meta_us_total << ',' << report.meta_us_total / total
       << '\n';
    os << "ae," << report.ae_us_total << ',' << report.ae_us_total / total << '\n';
    os << "rescale," << report.rescale_us_total << ','
       << report.rescale_us_total / total << '\n';
  }

  {
    std::ofstream os(out_dir + "/params.csv");
    if (!os) throw IoError("cannot write params.csv");
    os << "inference_path_params\n" << report.param_count << '\n';
  }

  for (SnrLevel level : kAllSnrLevels) {
    const auto& l = report.levels[index_of(level)];
    std::ofstream os(out_dir + "/distribution_" + to_string(level) + ".csv");
    if (!os) throw IoError("cannot write distribution csv");
    os << std::setprecision(10);
    os << "cc,trrmse,srrmse,input_cc\n";
    for (std::size_t i = 0; i < l.cc.size(); ++i)
      os << l.cc[i] << ',' << l.trrmse[i] << ',' << l.srrmse[i] << ','
         << l.input_cc[i] << '\n';
    const char* names[3] = {"cc", "trrmse", "srrmse"};
    for (int m = 0; m < 3; ++m) {
      const std::vector<double>& v = m == 0 ? l.cc : (m == 1 ? l.trrmse : l.srrmse);
      detail::write_histogram_svg(
          out_dir + "/hist_" + names[m] + "_" + to_string(level) + ".svg",
          detail::histogram(v),
          std::string(names[m]) + " @ " + to_string(level) + " SNR");
    }
  }
}

}  // namespace tada::report
