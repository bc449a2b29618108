#include "deepsc/keyvalue.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "deepsc/error.hpp"

namespace deepsc {

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.emplace_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

KeyValues KeyValues::parse(std::string_view text) {
  KeyValues kv;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw FormatError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw FormatError("config line " + std::to_string(line_no) + ": empty key");
    if (kv.contains(key)) throw FormatError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    kv.entries_.emplace_back(key, std::string(trim(line.substr(eq + 1))));
  }
  return kv;
}

KeyValues KeyValues::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void KeyValues::set(const std::string& key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(key, std::move(value));
}
void KeyValues::set(const std::string& key, double value) { set(key, format_double(value)); }
void KeyValues::set(const std::string& key, long long value) { set(key, std::to_string(value)); }
void KeyValues::set(const std::string& key, unsigned long long value) { set(key, std::to_string(value)); }
void KeyValues::set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }

const std::string* KeyValues::find(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return &v;
  return nullptr;
}

bool KeyValues::contains(std::string_view key) const { return find(key) != nullptr; }

namespace {

[[noreturn]] void bad(std::string_view key, const std::string& value, const char* what) {
  throw FormatError("config key '" + std::string(key) + "': '" + value + "' is not " + what);
}

template <class N>
N parse_number(std::string_view key, const std::string& value) {
  N out{};
  const auto* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc{} || res.ptr != end) bad(key, value, "a number");
  return out;
}

}  // namespace

std::string KeyValues::get_string(std::string_view key) const {
  const auto* v = find(key);
  if (!v) throw FormatError("config key '" + std::string(key) + "' is missing");
  return *v;
}

double KeyValues::get_double(std::string_view key) const {
  const auto v = get_string(key);
  if (v == "inf") return HUGE_VAL;
  if (v == "-inf") return -HUGE_VAL;
  return parse_number<double>(key, v);
}

long long KeyValues::get_int(std::string_view key) const { return parse_number<long long>(key, get_string(key)); }

unsigned long long KeyValues::get_uint(std::string_view key) const {
  return parse_number<unsigned long long>(key, get_string(key));
}

bool KeyValues::get_bool(std::string_view key) const {
  const auto v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(key, v, "a boolean");
}

std::string KeyValues::get_string(std::string_view key, std::string fallback) const {
  return contains(key) ? get_string(key) : fallback;
}
double KeyValues::get_double(std::string_view key, double fallback) const {
  return contains(key) ? get_double(key) : fallback;
}
long long KeyValues::get_int(std::string_view key, long long fallback) const {
  return contains(key) ? get_int(key) : fallback;
}
unsigned long long KeyValues::get_uint(std::string_view key, unsigned long long fallback) const {
  return contains(key) ? get_uint(key) : fallback;
}
bool KeyValues::get_bool(std::string_view key, bool fallback) const {
  return contains(key) ? get_bool(key) : fallback;
}

std::string KeyValues::to_string() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

}  // namespace deepsc
