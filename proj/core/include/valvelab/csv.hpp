#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace valvelab::csv {

/// Significant digits used for every floating-point value written to disk.
inline constexpr int kDigits = 9;

std::string format_number(double value, int digits = kDigits);

/**
 * In-memory table with a header row. Values are stored as doubles; text
 * columns are not needed by any artifact this library produces.
 */
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;

  /// Comma-separated, header first, LF line endings.
  std::string to_string(int digits = kDigits) const;
  void write(const std::filesystem::path& path, int digits = kDigits) const;
};

/// Parses comma-separated numeric data with a header row.
Table parse(const std::string& text);
Table read(const std::filesystem::path& path);

/// Single-column table, e.g. an excitation sequence.
Table single_column(const std::string& name, std::span<const double> values);

}  // namespace valvelab::csv
