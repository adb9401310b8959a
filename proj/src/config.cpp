#include "ionphase/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ionphase/errors.hpp"

namespace ionphase::cfg {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& text, const std::string& ctx) {
  const std::string t = trim(text);
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || *end != '\0') {
    throw ConfigError(ctx + ": cannot parse '" + t + "' as a number");
  }
  return v;
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
  ConfigFile c;
  c.origin_ = origin;
  c.raw_ = text;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
      }
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) {
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
      }
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    std::string full = section.empty() ? key : section + "." + key;
    if (c.values_.count(full)) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + full + "'");
    }
    c.values_[full] = value;
    c.lines_[full] = lineno;
  }
  return c;
}

void ConfigFile::fail(const std::string& key, const std::string& what) const {
  int ln = line_of(key);
  std::string loc = origin_;
  if (ln > 0) loc += ":" + std::to_string(ln);
  throw ConfigError(loc + ": key '" + key + "': " + what);
}

int ConfigFile::line_of(const std::string& key) const {
  auto it = lines_.find(key);
  return it == lines_.end() ? 0 : it->second;
}

std::string ConfigFile::require_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError(origin_ + ": missing required key '" + key + "'");
  }
  return it->second;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double ConfigFile::require_double(const std::string& key) const {
  return parse_double(require_string(key), origin_ + ": key '" + key + "'");
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return parse_double(it->second, origin_ + ": key '" + key + "'");
}

long long ConfigFile::require_int(const std::string& key) const {
  double v = require_double(key);
  long long i = static_cast<long long>(v);
  if (static_cast<double>(i) != v) fail(key, "expected an integer");
  return i;
}

long long ConfigFile::get_int(const std::string& key, long long fallback) const {
  if (!has(key)) return fallback;
  return require_int(key);
}

std::uint64_t ConfigFile::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string t = require_string(key);
  char* end = nullptr;
  std::uint64_t v = std::strtoull(t.c_str(), &end, 10);
  if (end == t.c_str() || *end != '\0') fail(key, "expected an unsigned integer");
  return v;
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  std::string v = require_string(key);
  for (auto& ch : v) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  fail(key, "expected a boolean (true/false/on/off)");
}

std::vector<double> ConfigFile::require_double_list(const std::string& key) const {
  std::string raw = require_string(key);
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= raw.size()) {
    auto comma = raw.find(',', start);
    std::string item = comma == std::string::npos ? raw.substr(start) : raw.substr(start, comma - start);
    item = trim(item);
    if (!item.empty()) {
      out.push_back(parse_double(item, origin_ + ": key '" + key + "'"));
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) fail(key, "expected a comma-separated list of numbers");
  return out;
}

std::vector<double> ConfigFile::get_double_list(const std::string& key, std::vector<double> fallback) const {
  if (!has(key)) return fallback;
  return require_double_list(key);
}

std::vector<std::string> ConfigFile::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) {
    if (k.rfind(prefix, 0) == 0) out.push_back(k);
  }
  return out;
}

std::uint64_t ConfigFile::content_hash() const {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char ch : raw_) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace ionphase::cfg
