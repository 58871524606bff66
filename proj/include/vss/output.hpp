#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace vss {

/// "%.8e" (nine significant digits); non-finite values print as nan / inf / -inf.
std::string format_number(double x);

/// Buffers rows and writes once; '.' decimals, ',' delimiter, LF line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  std::string str() const;
  void write(const std::filesystem::path& path) const;
  std::size_t rows() const noexcept { return rows_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

/// Throws ErrorKind::io on failure.
void write_text(const std::filesystem::path& path, const std::string& content);
void ensure_directory(const std::filesystem::path& dir);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartAxes {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

std::string svg_line_chart(const ChartAxes& axes, const std::vector<Series>& series);

/// values[row][col] over y[row] × x[col]; colour scale is linear in the value.
std::string svg_heatmap(const ChartAxes& axes, const std::vector<double>& x,
                        const std::vector<double>& y, const std::vector<std::vector<double>>& values);

}  // namespace vss
