#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace valvelab::cli {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInvalid = 2,  ///< configuration or input validation failed
  kRuntime = 3,  ///< a numeric, identification or design step failed
};

struct RunOptions {
  std::optional<std::filesystem::path> out;  ///< overrides [run] out
  std::optional<std::uint64_t> seed;
  unsigned parallel = 1;
};

/// Plain-text report, one `name = value` headline per line.
class Report {
 public:
  void add(const std::string& name, double value);
  void add(const std::string& name, const std::string& value);
  std::string to_string() const;
  const std::vector<std::pair<std::string, std::string>>& lines() const { return lines_; }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

std::vector<std::string> command_names();
/// Sections and keys accepted by `command`; throws ConfigError for unknown commands.
Schema schema_for(const std::string& command);

/**
 * Validates the configuration and runs one subcommand, writing its artifacts
 * under options.out. Messages go to `log`; the report is echoed there too.
 */
int run_command(const std::string& command, const Config& config, const RunOptions& options, std::ostream& log);

}  // namespace valvelab::cli
