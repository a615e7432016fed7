#pragma once

#include <string>
#include <vector>

namespace splinenet::experiment {

/// "%.17g", with "inf", "-inf" and "nan" for non-finite values.
std::string csv_real(double v);

/// Quotes a field containing a comma, quote or newline.
std::string csv_field(const std::string& s);

/// Table with a fixed header; rows must match the header width.
class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> columns);

  /// Throws std::invalid_argument on a width mismatch.
  void add_row(std::vector<std::string> cells);

  [[nodiscard]] const std::vector<std::string>& columns() const noexcept { return columns_; }
  [[nodiscard]] const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
  [[nodiscard]] bool empty() const noexcept { return rows_.empty(); }
  /// Header plus rows, '\n' line endings.
  [[nodiscard]] std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace splinenet::experiment
