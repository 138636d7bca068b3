#include "umse/csv.hpp"

#include <charconv>

#include "umse/errors.hpp"

namespace umse {

std::string format_number(double value) {
  if (std::isnan(value)) return {};
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string format_number(std::optional<double> value) {
  return value ? format_number(*value) : std::string();
}

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw InvalidArgument("table row has " + std::to_string(row.size()) + " cells, header has " +
                          std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

void write_csv(std::ostream& out, const Table& table) {
  write_csv_row(out, table.columns);
  std::vector<std::string> cells;
  for (const auto& row : table.rows) {
    cells.clear();
    for (double v : row) cells.push_back(format_number(v));
    write_csv_row(out, cells);
  }
}

}  // namespace umse
