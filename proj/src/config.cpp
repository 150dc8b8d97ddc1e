#include "slowtrap/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace slowtrap {
namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double to_double(const std::string& text, const std::string& where) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw ConfigError(where + ": not a number: '" + s + "'");
  return v;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto where = origin + ":" + std::to_string(lineno);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      cfg.data_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    if (section.empty()) throw ConfigError(where + ": key outside any section");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (cfg.data_[section].count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    cfg.data_[section][key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void Config::merge(const Config& other) {
  for (const auto& [sec, kv] : other.data_)
    for (const auto& [k, v] : kv) data_[sec][k] = v;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  data_[section][key] = value;
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = data_.find(section);
  return s != data_.end() && s->second.count(key) > 0;
}

std::vector<std::string> Config::sections() const {
  std::vector<std::string> out;
  for (const auto& kv : data_) out.push_back(kv.first);
  return out;
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  if (!has(section, key)) return fallback;
  return data_.at(section).at(key);
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  if (!has(section, key)) return fallback;
  return to_double(data_.at(section).at(key), section + "." + key);
}

std::int64_t Config::get_int(const std::string& section, const std::string& key, std::int64_t fallback) const {
  if (!has(section, key)) return fallback;
  const double v = get_double(section, key, 0.0);
  if (v != std::floor(v) || std::abs(v) > 9e15) throw ConfigError(section + "." + key + ": not an integer");
  return static_cast<std::int64_t>(v);
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const auto& v = data_.at(section).at(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(section + "." + key + ": not a boolean: '" + v + "'");
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const {
  if (!has(section, key)) return fallback;
  std::vector<double> out;
  std::istringstream in(data_.at(section).at(key));
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_double(item, section + "." + key));
  if (out.empty()) throw ConfigError(section + "." + key + ": empty list");
  return out;
}

void Config::require_known(const std::string& section, const std::vector<std::string>& allowed) const {
  const auto s = data_.find(section);
  if (s == data_.end()) return;
  for (const auto& kv : s->second)
    if (std::find(allowed.begin(), allowed.end(), kv.first) == allowed.end())
      throw ConfigError("unknown key '" + kv.first + "' in section [" + section + "]");
}

void Config::require_sections(const std::vector<std::string>& allowed) const {
  for (const auto& kv : data_)
    if (std::find(allowed.begin(), allowed.end(), kv.first) == allowed.end())
      throw ConfigError("unknown section [" + kv.first + "]");
}

}  // namespace slowtrap
