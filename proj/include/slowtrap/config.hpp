#pragma once

// Flat key-value configuration with [sections]. Lines are `key = value`;
// `#` starts a comment. Lists are comma separated. Unknown sections and
// keys are rejected by the consumer through `require_known`.

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace slowtrap {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::filesystem::path& path);

  /// Values of `other` replace ours key by key.
  void merge(const Config& other);
  void set(const std::string& section, const std::string& key, const std::string& value);

  bool has(const std::string& section, const std::string& key) const;
  std::vector<std::string> sections() const;

  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                  const std::vector<double>& fallback) const;

  /// Throws ConfigError naming the first key of `section` not in `allowed`.
  void require_known(const std::string& section, const std::vector<std::string>& allowed) const;
  /// Throws ConfigError for a section outside `allowed`.
  void require_sections(const std::vector<std::string>& allowed) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
};

}  // namespace slowtrap
