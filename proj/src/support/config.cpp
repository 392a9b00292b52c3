#include "dynlearn/support/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "dynlearn/support/csv.hpp"
#include "dynlearn/support/errors.hpp"
#include "dynlearn/support/hash.hpp"

namespace dynlearn {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

KeyValue KeyValue::parse_text(const std::string& text) {
  KeyValue kv;
  std::string section;
  std::size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = trim(std::string_view(text.data() + pos, eol - pos));
    ++lineno;
    pos = eol + 1;
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("unterminated section at line " + std::to_string(lineno));
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key at line " + std::to_string(lineno));
    if (!section.empty()) key = section + "." + key;
    kv.values_[key] = value;
    if (pos > text.size()) break;
  }
  return kv;
}

KeyValue KeyValue::parse_file(const std::filesystem::path& path) {
  return parse_text(read_text_file(path));
}

bool KeyValue::has(const std::string& key) const { return values_.count(key) != 0; }

std::vector<std::string> KeyValue::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) {
    if (k.rfind(prefix, 0) == 0) out.push_back(k);
  }
  return out;
}

const std::string& KeyValue::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

std::string KeyValue::str_or(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValue::f64(const std::string& key) const {
  const std::string& s = str(key);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError("config key " + key + " is not a number: " + s);
  return v;
}

double KeyValue::f64_or(const std::string& key, double fallback) const {
  return has(key) ? f64(key) : fallback;
}

long long KeyValue::i64(const std::string& key) const {
  const std::string& s = str(key);
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError("config key " + key + " is not an integer: " + s);
  return v;
}

long long KeyValue::i64_or(const std::string& key, long long fallback) const {
  return has(key) ? i64(key) : fallback;
}

std::uint64_t KeyValue::u64_or(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string& s = str(key);
  char* end = nullptr;
  std::uint64_t v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError("config key " + key + " is not an unsigned integer: " + s);
  return v;
}

bool KeyValue::flag_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& s = str(key);
  if (s == "true" || s == "1" || s == "on") return true;
  if (s == "false" || s == "0" || s == "off") return false;
  throw ConfigError("config key " + key + " is not a boolean: " + s);
}

std::vector<double> KeyValue::f64_list(const std::string& key) const {
  const std::string& s = str(key);
  std::vector<double> out;
  const char* p = s.c_str();
  while (*p) {
    char* end = nullptr;
    double v = std::strtod(p, &end);
    if (end == p) throw ConfigError("config key " + key + " has a bad list entry");
    out.push_back(v);
    p = end;
    while (*p == ',' || *p == ' ') ++p;
  }
  if (out.empty()) throw ConfigError("config key " + key + " is an empty list");
  return out;
}

std::vector<long long> KeyValue::i64_list(const std::string& key) const {
  std::vector<long long> out;
  for (double v : f64_list(key)) out.push_back(static_cast<long long>(v));
  return out;
}

void KeyValue::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

void KeyValue::set_f64(const std::string& key, double value) {
  set(key, format_g17(value));
}

void KeyValue::set_i64(const std::string& key, long long value) {
  set(key, std::to_string(value));
}

void KeyValue::merge(const KeyValue& overrides) {
  for (const auto& [k, v] : overrides.values_) values_[k] = v;
}

std::string KeyValue::canonical_text() const {
  std::string out;
  for (const auto& [k, v] : values_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

std::uint64_t KeyValue::hash64() const { return fnv1a64(canonical_text()); }

std::string KeyValue::hash_hex() const { return to_hex(hash64()); }

}  // namespace dynlearn
