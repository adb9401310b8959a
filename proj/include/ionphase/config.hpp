#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ionphase::cfg {

/// Flat view of a nested key = value configuration file.
///
/// Syntax: `[section]` / `[section.sub]` headers, `key = value` entries,
/// `#` or `;` comments, blank lines.  Keys are addressed by their full
/// dotted path ("chain.drift.values_hz").  Values keep their raw text and
/// are converted on access; conversion failures report file, line and key.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string require_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double require_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long require_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> require_double_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key, std::vector<double> fallback) const;

  /// All full keys beginning with `prefix` (used to detect optional sections).
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  /// FNV-1a 64 over the raw file bytes; stamped into every output file.
  std::uint64_t content_hash() const;

  const std::string& origin() const { return origin_; }
  const std::string& raw_text() const { return raw_; }

 private:
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;
  int line_of(const std::string& key) const;

  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  std::string origin_;
  std::string raw_;
};

}  // namespace ionphase::cfg
