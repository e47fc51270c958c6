#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "tada/errors.hpp"

namespace tada {

/// Flat key-value config: "section.key = value", '#' comments.
class Config {
 public:
  Config() = default;

  static Config from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config: " + path);
    Config cfg;
    std::string line;
    while (std::getline(is, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      cfg.values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : std::stod(it->second);
  }

  long get_int(const std::string& key, long fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : std::stol(it->second);
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::map<std::string, std::string> values_;
};

}  // namespace tada
