#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace eitbec::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal form that round-trips to the same double; scientific
/// notation for |x| >= 1e6 or 0 < |x| < 1e-4, plain fixed form otherwise.
/// Rejects non-finite values.
std::string format_number(double x);

/// Fixed-precision form for SVG coordinates (two decimals, locale-free).
std::string format_coordinate(double x);

/// Writes one CSV record: fields joined by commas, terminated by '\n'.
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

/// schema_version comment, written as the first line of every CSV.
void write_csv_schema_line(std::ostream& os, const std::string& subcommand);

struct DataTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // cells kept verbatim

  int column_index(const std::string& name) const;  // -1 when absent
};

/// Reads a CSV produced by this tool: '#' comment lines are skipped, the
/// first remaining line is the header. Throws ConfigError on ragged rows or
/// an empty file.
DataTable read_csv(std::istream& is);

/// Cell parsed as a double; throws ConfigError on non-numeric content.
double parse_cell(const std::string& cell, const std::string& column);

}  // namespace eitbec::cli
