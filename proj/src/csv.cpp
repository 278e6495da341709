#include "polattn/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "polattn/errors.hpp"

namespace polattn {

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<CsvCell> row) {
  if (row.size() != columns_.size())
    throw ValidationError("csv row has " + std::to_string(row.size()) + " cells, expected " +
                          std::to_string(columns_.size()));
  rows_.push_back(std::move(row));
}

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i] == name) return i;
  throw LookupError("no csv column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& column) const {
  const auto& cell = rows_.at(row).at(column_index(column));
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<long long>(&cell)) return static_cast<double>(*i);
  throw LookupError("csv cell '" + column + "' is not numeric");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const CsvCell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return quote(std::get<std::string>(c));
}

}  // namespace

void write_csv(std::ostream& out, const CsvTable& table, const CsvMeta& meta) {
  out << "# tool_version=" << meta.tool_version << '\n'
      << "# scenario_hash=" << meta.scenario_hash << '\n'
      << "# seed=" << meta.seed << '\n'
      << "# command=" << meta.command << '\n';
  for (std::size_t i = 0; i < table.columns().size(); ++i) out << (i ? "," : "") << quote(table.columns()[i]);
  out << '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
}

}  // namespace polattn
