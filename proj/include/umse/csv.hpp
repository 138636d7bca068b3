#pragma once

#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace umse {

// Shortest decimal that parses back to the same double.
std::string format_number(double value);
// Empty string for nullopt.
std::string format_number(std::optional<double> value);

// Numeric table written as CSV with a fixed header. NaN cells are written
// empty (an absent value).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
};

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);
void write_csv(std::ostream& out, const Table& table);

inline double or_nan(std::optional<double> v) {
  return v ? *v : std::nan("");
}

}  // namespace umse
