#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace heatlink::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string source;  // file path, used in error messages

  int column(const std::string& name) const;          // -1 if absent
  int require_column(const std::string& name) const;  // throws with location
  const std::string& cell(std::size_t row, int col) const;
  double number(std::size_t row, int col) const;      // throws with row/column location
  double number(std::size_t row, const std::string& name) const;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads a comma-separated file. Lines starting with '#' are comments; the
/// first non-comment line is the header.
Table read_file(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path,
                const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

std::string format_number(double v);

}  // namespace heatlink::csv
