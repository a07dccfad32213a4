#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dpmod::tools {

/// Comma-separated table with a header row; no quoting (none of our outputs
/// need it).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws Error{BadConfig} for an unknown column.
  [[nodiscard]] std::size_t column_index(const std::string& name) const;
  [[nodiscard]] std::vector<double> numeric_column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;  ///< non-positive values are dropped on a log axis
};

/// Static SVG line chart with axes, ticks and a legend.
std::string render_line_chart(const ChartSpec& spec, const std::vector<Series>& series);

/// Plots columns `ys` of a CSV against column `x`. Rows are split into one
/// series per distinct value of the `group_by` columns.
void plot_csv(const std::filesystem::path& csv, const std::string& x, const std::vector<std::string>& ys,
              const std::vector<std::string>& group_by, const ChartSpec& spec,
              const std::filesystem::path& svg);

}  // namespace dpmod::tools
