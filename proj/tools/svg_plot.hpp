#pragma once

#include <string>

#include "table.hpp"

namespace eitbec::cli {

struct PlotSpec {
  std::string x_column;
  std::string y_column;
  std::string group_column;  // empty: single series
  bool log_x = false;
  bool log_y = false;
  std::string title;
};

/// Standalone SVG 1.1 line chart, fixed 800x600 viewBox, one polyline per
/// group (groups ordered by first appearance, colored from a fixed palette),
/// log axes ticked at powers of ten. Byte-deterministic for identical inputs.
/// Rows whose coordinates cannot sit on a log axis (values <= 0) are dropped;
/// a group with no drawable points is an error, as are unknown columns.
std::string render_line_chart(const DataTable& data, const PlotSpec& spec);

}  // namespace eitbec::cli
