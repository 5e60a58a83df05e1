#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace valvelab::cli {

/// One `key = value` assignment and where it came from.
struct Entry {
  std::string value;
  std::string origin;  ///< "file.ini:12" or "--set"
};

/**
 * Scenario configuration: `[section]` headers followed by `key = value`
 * lines, '#' or ';' comments. Keys outside a section belong to "".
 */
class Config {
 public:
  static Config parse(const std::string& text, const std::string& source = "<config>");
  static Config load(const std::string& path);

  /// Applies "section.key=value" (or "key=value" for the unnamed section).
  void set(const std::string& assignment);
  void set(const std::string& section, const std::string& key, const std::string& value,
           const std::string& origin = "--set");

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const { return sections_.count(section) != 0; }
  const Entry* find(const std::string& section, const std::string& key) const;
  const std::map<std::string, std::map<std::string, Entry>>& sections() const { return sections_; }
  /// Where a section was opened, empty for sections created by overrides.
  std::string section_origin(const std::string& section) const;

  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  /// Whitespace- or comma-separated numbers.
  std::vector<double> get_list(const std::string& section, const std::string& key,
                               const std::vector<double>& fallback) const;
  std::vector<std::string> get_words(const std::string& section, const std::string& key,
                                     const std::vector<std::string>& fallback) const;

 private:
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::map<std::string, std::string> headers_;  ///< origin of each section header

};

/// Allowed sections and keys for one subcommand.
using Schema = std::map<std::string, std::set<std::string>>;

/// Throws ConfigError naming the origin of the first unknown section or key.
void validate(const Config& config, const Schema& schema);

}  // namespace valvelab::cli
