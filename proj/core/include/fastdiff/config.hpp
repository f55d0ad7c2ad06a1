#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fastdiff {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key=value configuration with '#' comments. Parse errors and typed
/// lookups report the offending key and line number.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;

  /// Comma-separated list of doubles.
  std::vector<double> get_double_list(const std::string& key) const;

  std::vector<std::string> keys() const;
  const std::string& origin() const { return origin_; }

 private:
  struct Entry {
    std::string value;
    int line;
  };
  std::string origin_;
  std::map<std::string, Entry> entries_;

  const Entry& require(const std::string& key) const;
};

}  // namespace fastdiff
