#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace qgraph {

/// 17 significant digits, '.' decimal point, no locale. Non-finite values
/// are written as nan / inf / -inf.
std::string format_double(double value);

using CsvCell = std::variant<std::int64_t, double, std::string>;

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<CsvCell> row);
  const std::vector<std::string>& header() const noexcept { return header_; }
  std::size_t row_count() const noexcept { return rows_.size(); }

  std::string to_string() const;
  /// Whitespace-separated columns with a '#' header line, for gnuplot.
  std::string to_gnuplot(const std::vector<std::size_t>& columns) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<CsvCell>> rows_;
};

/// Throws io_error when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace qgraph
