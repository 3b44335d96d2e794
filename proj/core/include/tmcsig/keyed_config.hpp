#pragma once

// `key = value` text documents with '#' comments, used for demand and
// experiment spec files.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tmcsig {

class KeyedConfig {
 public:
  static KeyedConfig parse(std::string_view text);
  static KeyedConfig load(const std::filesystem::path& path);

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> find(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;

  /// Comma-separated list; empty when the key is absent.
  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

}  // namespace tmcsig
