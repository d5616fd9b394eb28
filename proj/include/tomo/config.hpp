#pragma once

#include <map>
#include <string>
#include <vector>

#include "tomo/types.hpp"

namespace tomo {

/// Flat dotted-key configuration ("geometry.n_full = 12"), one pair per
/// line, '#' comments. Unknown keys are kept; typed getters throw
/// ConfigError naming the missing or malformed key.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int_or(const std::string& key, long long fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  std::vector<int> get_int_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;
  /// "elev:amp,elev:amp" pairs.
  std::vector<std::pair<double, double>> get_pair_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

  /// FNV-1a digest of the canonical key=value serialization.
  std::string digest() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace tomo
