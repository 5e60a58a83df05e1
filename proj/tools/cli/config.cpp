#include "config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "valvelab/error.hpp"

namespace valvelab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) return v.substr(1, v.size() - 2);
  return v;
}

[[noreturn]] void bad_value(const Entry& e, const std::string& section, const std::string& key,
                            const std::string& what) {
  throw ConfigError(e.origin + ": [" + section + "] " + key + " = '" + e.value + "': " + what);
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& source) {
  Config c;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string where = source + ":" + std::to_string(n);
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      c.sections_[section];
      c.headers_.emplace(section, where);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": missing key");
    if (c.has(section, key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    c.set(section, key, unquote(trim(line.substr(eq + 1))), where);
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set " + assignment + ": expected section.key=value");
  const std::string lhs = trim(assignment.substr(0, eq));
  const auto dot = lhs.find('.');
  const std::string section = dot == std::string::npos ? std::string{} : lhs.substr(0, dot);
  const std::string key = dot == std::string::npos ? lhs : lhs.substr(dot + 1);
  if (key.empty()) throw ConfigError("--set " + assignment + ": missing key");
  set(section, key, unquote(trim(assignment.substr(eq + 1))), "--set " + lhs);
}

void Config::set(const std::string& section, const std::string& key, const std::string& value,
                 const std::string& origin) {
  sections_[section][key] = Entry{value, origin};
}

std::string Config::section_origin(const std::string& section) const {
  const auto it = headers_.find(section);
  return it == headers_.end() ? std::string{} : it->second;
}

bool Config::has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }

const Entry* Config::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  const auto* e = find(section, key);
  return e ? e->value : fallback;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  const auto* e = find(section, key);
  if (!e) return fallback;
  const char* begin = e->value.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) bad_value(*e, section, key, "expected a number");
  return v;
}

long long Config::get_int(const std::string& section, const std::string& key, long long fallback) const {
  const auto* e = find(section, key);
  if (!e) return fallback;
  const char* begin = e->value.c_str();
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE) bad_value(*e, section, key, "expected an integer");
  return v;
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key, std::uint64_t fallback) const {
  const auto* e = find(section, key);
  if (!e) return fallback;
  const char* begin = e->value.c_str();
  char* end = nullptr;
  errno = 0;
  if (e->value.find('-') != std::string::npos) bad_value(*e, section, key, "expected a non-negative integer");
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE) bad_value(*e, section, key, "expected a non-negative integer");
  return v;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const auto* e = find(section, key);
  if (!e) return fallback;
  std::string v = e->value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  bad_value(*e, section, key, "expected true or false");
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
  const auto* e = find(section, key);
  if (!e) return fallback;
  std::string text = e->value;
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::vector<double> out;
  std::string token;
  while (in >> token) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') bad_value(*e, section, key, "expected a list of numbers");
    out.push_back(v);
  }
  if (out.empty()) bad_value(*e, section, key, "expected at least one number");
  return out;
}

std::vector<std::string> Config::get_words(const std::string& section, const std::string& key,
                                           const std::vector<std::string>& fallback) const {
  const auto* e = find(section, key);
  if (!e) return fallback;
  std::string text = e->value;
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string token;
  while (in >> token) out.push_back(token);
  if (out.empty()) bad_value(*e, section, key, "expected at least one name");
  return out;
}

void validate(const Config& config, const Schema& schema) {
  for (const auto& [section, entries] : config.sections()) {
    const auto s = schema.find(section);
    if (s == schema.end()) {
      std::string where = config.section_origin(section);
      if (where.empty()) where = entries.empty() ? std::string("config") : entries.begin()->second.origin;
      throw ConfigError(where + ": unknown section [" + section + "] for this command");
    }
    for (const auto& [key, entry] : entries)
      if (!s->second.count(key)) throw ConfigError(entry.origin + ": unknown key '" + key + "' in [" + section + "]");
  }
}

}  // namespace valvelab::cli
