// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

namespace levyscope {

/// Flat key-value configuration: one `section.key = value` pair per line,
/// `#` starts a comment. Getters validate and raise ConfigError with the
/// offending line and field named.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& origin = "<string>");

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key,
                            const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int_or(const std::string& key, int fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  /// whitespace-separated list of reals
  std::vector<double> get_doubles(const std::string& key) const;

  /// range-checked accessors (violations carry the field name)
  double get_double_in(const std::string& key, double lo, double hi,
                       bool lo_open = false, bool hi_open = false) const;
  double get_positive(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const {
    return entries_;
  }
  int line_of(const std::string& key) const;
  const std::string& origin() const { return origin_; }

 private:
  std::map<std::string, std::string> entries_;
  std::map<std::string, int> lines_;
  std::string origin_;
};

}  // namespace levyscope
