#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace polattn {

using CsvCell = std::variant<double, long long, std::string>;

class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> columns);

  void add_row(std::vector<CsvCell> row);
  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<CsvCell>>& rows() const noexcept { return rows_; }
  std::size_t column_index(const std::string& name) const;
  double number(std::size_t row, const std::string& column) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<CsvCell>> rows_;
};

struct CsvMeta {
  std::string tool_version;
  std::string scenario_hash;
  std::uint64_t seed = 0;
  std::string command;
};

// Shortest round-trip decimal; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double x);

// Comment header (# key=value) followed by the column row and the data rows.
void write_csv(std::ostream& out, const CsvTable& table, const CsvMeta& meta);

}  // namespace polattn
