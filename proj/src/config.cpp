// SPDX-License-Identifier: Apache-2.0
#include "levyscope/config.hpp"

#include <fstream>
#include <sstream>

#include "levyscope/errors.hpp"

namespace levyscope {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config error: cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

Config Config::parse_string(const std::string& text,
                            const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config error: " + origin + ":" +
                        std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config error: " + origin + ":" +
                        std::to_string(lineno) + ": empty key");
    if (cfg.entries_.count(key))
      throw ConfigError("config error: " + origin + ":" +
                        std::to_string(lineno) + ": duplicate field '" + key +
                        "'");
    cfg.entries_[key] = value;
    cfg.lines_[key] = lineno;
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return entries_.count(key); }

int Config::line_of(const std::string& key) const {
  const auto it = lines_.find(key);
  return it == lines_.end() ? 0 : it->second;
}

std::string Config::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end())
    throw ConfigError("config error: missing field '" + key + "'");
  return it->second;
}

std::string Config::get_string_or(const std::string& key,
                                  const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config error: line " + std::to_string(line_of(key)) +
                      ": field '" + key + "': expected a real, got '" + v +
                      "'");
  }
}

double Config::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    size_t used = 0;
    const int i = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError("config error: line " + std::to_string(line_of(key)) +
                      ": field '" + key + "': expected an integer, got '" + v +
                      "'");
  }
}

int Config::get_int_or(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config error: line " + std::to_string(line_of(key)) +
                    ": field '" + key + "': expected a boolean, got '" + v +
                    "'");
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  const std::string v = get_string(key);
  std::istringstream in(v);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("config error: line " + std::to_string(line_of(key)) +
                        ": field '" + key + "': expected reals, got '" + tok +
                        "'");
    }
  }
  if (out.empty())
    throw ConfigError("config error: line " + std::to_string(line_of(key)) +
                      ": field '" + key + "': empty list");
  return out;
}

double Config::get_double_in(const std::string& key, double lo, double hi,
                             bool lo_open, bool hi_open) const {
  const double v = get_double(key);
  const bool lo_ok = lo_open ? v > lo : v >= lo;
  const bool hi_ok = hi_open ? v < hi : v <= hi;
  if (!lo_ok || !hi_ok) {
    std::ostringstream os;
    os << "config error: line " << line_of(key) << ": field '" << key
       << "': value " << v << " outside " << (lo_open ? "(" : "[") << lo
       << ", " << hi << (hi_open ? ")" : "]");
    throw ConfigError(os.str());
  }
  return v;
}

double Config::get_positive(const std::string& key) const {
  const double v = get_double(key);
  if (!(v > 0.0))
    throw ConfigError("config error: line " + std::to_string(line_of(key)) +
                      ": field '" + key + "': must be positive");
  return v;
}

}  // namespace levyscope
