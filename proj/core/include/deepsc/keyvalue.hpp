#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace deepsc {

/// Ordered `key = value` document. Blank lines and lines starting with `#`
/// are ignored; keys are unique; surrounding whitespace is trimmed.
class KeyValues {
 public:
  static KeyValues parse(std::string_view text);
  static KeyValues load(const std::string& path);

  /// Inserts or replaces, keeping the first insertion position.
  void set(const std::string& key, std::string value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long long value);
  void set(const std::string& key, unsigned long long value);
  void set(const std::string& key, bool value);

  bool contains(std::string_view key) const;
  const std::string* find(std::string_view key) const;

  /// Throws FormatError when missing or malformed.
  std::string get_string(std::string_view key) const;
  double get_double(std::string_view key) const;
  long long get_int(std::string_view key) const;
  unsigned long long get_uint(std::string_view key) const;
  bool get_bool(std::string_view key) const;

  std::string get_string(std::string_view key, std::string fallback) const;
  double get_double(std::string_view key, double fallback) const;
  long long get_int(std::string_view key, long long fallback) const;
  unsigned long long get_uint(std::string_view key, unsigned long long fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string to_string() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Comma-separated list helpers.
std::vector<std::string> split_list(std::string_view text, char sep = ',');
std::string_view trim(std::string_view text);

}  // namespace deepsc
