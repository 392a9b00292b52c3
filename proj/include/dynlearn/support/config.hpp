#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace dynlearn {

/// Flat key-value configuration text with [section] headers. Keys are stored
/// as "section.key" (or bare "key" before any section). Canonical
/// serialization sorts keys, which makes the config hash stable under
/// reordering and whitespace changes.
class KeyValue {
 public:
  static KeyValue parse_text(const std::string& text);
  static KeyValue parse_file(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  const std::string& str(const std::string& key) const;
  std::string str_or(const std::string& key, const std::string& fallback) const;
  double f64(const std::string& key) const;
  double f64_or(const std::string& key, double fallback) const;
  long long i64(const std::string& key) const;
  long long i64_or(const std::string& key, long long fallback) const;
  std::uint64_t u64_or(const std::string& key, std::uint64_t fallback) const;
  bool flag_or(const std::string& key, bool fallback) const;
  std::vector<double> f64_list(const std::string& key) const;
  std::vector<long long> i64_list(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  void set_f64(const std::string& key, double value);
  void set_i64(const std::string& key, long long value);

  /// Later entries win; used to layer --seed/--out overrides onto presets.
  void merge(const KeyValue& overrides);

  std::string canonical_text() const;
  std::uint64_t hash64() const;
  std::string hash_hex() const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace dynlearn
