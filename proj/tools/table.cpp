#include "table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace eitbec::cli {

std::string format_number(double x) {
  if (!std::isfinite(x)) {
    throw ConfigError("refusing to write a non-finite value into a CSV");
  }
  if (x == 0.0) return "0";
  const double ax = std::abs(x);
  char buf[64];
  const std::chars_format fmt = (ax >= 1e6 || ax < 1e-4)
                                    ? std::chars_format::scientific
                                    : std::chars_format::fixed;
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, fmt);
  if (ec != std::errc()) throw ConfigError("number formatting failed");
  return std::string(buf, ptr);
}

std::string format_coordinate(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, 2);
  if (ec != std::errc()) throw ConfigError("coordinate formatting failed");
  return std::string(buf, ptr);
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << fields[i];
  }
  os << '\n';
}

void write_csv_schema_line(std::ostream& os, const std::string& subcommand) {
  os << "# schema_version=1 subcommand=" << subcommand << '\n';
}

int DataTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

DataTable read_csv(std::istream& is) {
  DataTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (!have_header) {
      table.columns = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.columns.size()) {
      throw ConfigError("malformed CSV: row has " + std::to_string(cells.size()) +
                        " cells, header has " + std::to_string(table.columns.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw ConfigError("malformed CSV: no header row");
  return table;
}

double parse_cell(const std::string& cell, const std::string& column) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("column '" + column + "' holds non-numeric cell '" + cell + "'");
  }
  return v;
}

}  // namespace eitbec::cli
