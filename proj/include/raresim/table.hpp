#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace raresim {

/// Rectangular numeric result table with a metadata block. CSV output is
/// deterministic and locale-independent: identical inputs give
/// byte-identical files.
struct ResultTable {
  std::vector<std::string> columns;  ///< names with unit suffixes
  std::vector<std::vector<double>> rows;
  std::vector<std::string> row_tags;  ///< per-row error tag, "" when ok
  std::vector<std::pair<std::string, std::string>> metadata;

  void add_row(std::vector<double> row, std::string tag = "");
  void validate() const;  ///< rectangularity
};

/// Shortest round-trip decimal form (std::to_chars); parses back to the
/// identical double.
std::string format_double(double v);

/// '#'-prefixed metadata lines, header row, then data rows. A trailing
/// "error" column is appended when any row carries a tag.
void write_csv(const ResultTable& table, std::ostream& out);
void write_csv_file(const ResultTable& table, const std::string& path);

/// Minimal SVG line plot of selected columns against the first column.
/// Axes and a legend only; intended for quick inspection next to the CSV.
void write_svg_file(const ResultTable& table,
                    const std::vector<std::size_t>& y_columns,
                    const std::string& title, const std::string& path,
                    bool log_x = false, bool log_y = false);

}  // namespace raresim
