#pragma once

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tada/errors.hpp"

namespace tada::gradnet {

/// One named entry in a weight bundle. `data` may point at a parameter
/// tensor's storage or at auxiliary state (e.g. batch-norm running stats).
struct NamedTensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double>* data;
};

/// Self-describing text weight format: ordered named entries with shape
/// and full-precision decimal values. Round-trips doubles exactly.
inline void save_weights(const std::string& path,
                         const std::vector<NamedTensor>& entries) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for write: " + path);
  os << "TADAWEIGHTS1\n";
  os << std::setprecision(17);
  for (const auto& e : entries) {
    os << "entry " << e.name << "\nshape";
    for (std::size_t d : e.shape) os << ' ' << d;
    os << "\ndata";
    for (double v : *e.data) os << ' ' << v;
    os << '\n';
  }
  if (!os) throw IoError("write failed: " + path);
}

inline void load_weights(const std::string& path,
                         const std::vector<NamedTensor>& entries) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open: " + path);
  std::string header;
  std::getline(is, header);
  if (header != "TADAWEIGHTS1") throw IoError("bad weight file header: " + path);
  std::map<std::string, std::vector<double>> loaded;
  std::map<std::string, std::vector<std::size_t>> shapes;
  std::string line;
  std::string current;
  while (std::getline(is, line)) {
    if (line.rfind("entry ", 0) == 0) {
      current = line.substr(6);
    } else if (line.rfind("shape", 0) == 0) {
      std::stringstream ss(line.substr(5));
      std::size_t d;
      while (ss >> d) shapes[current].push_back(d);
    } else if (line.rfind("data", 0) == 0) {
      std::stringstream ss(line.substr(4));
      double v;
      while (ss >> v) loaded[current].push_back(v);
    }
  }
  for (const auto& e : entries) {
    auto it = loaded.find(e.name);
    if (it == loaded.end()) throw IoError("missing weight entry: " + e.name);
    if (it->second.size() != e.data->size() || shapes[e.name] != e.shape)
      throw ShapeMismatch("weight entry shape mismatch: " + e.name);
    *e.data = it->second;
  }
}

}  // namespace tada::gradnet
