#include "svg_plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

namespace eitbec::cli {

namespace {

constexpr double kWidth = 800.0, kHeight = 600.0;
constexpr double kLeft = 72.0, kRight = 24.0, kTop = 48.0, kBottom = 56.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double map(double v, double pix_lo, double pix_hi) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double x = log ? std::log10(v) : v;
    const double f = (b > a) ? (x - a) / (b - a) : 0.5;
    return pix_lo + f * (pix_hi - pix_lo);
  }
};

std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  const double first = std::ceil(lo / step) * step;
  for (double v = first; v <= hi + 1e-9 * span; v += step) {
    ticks.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  }
  return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
  const int d_lo = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
  const int d_hi = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
  int stride = 1;
  if (d_hi - d_lo > 8) stride = (d_hi - d_lo + 7) / 8;
  std::vector<double> ticks;
  for (int d = d_lo; d <= d_hi; d += stride) ticks.push_back(std::pow(10.0, d));
  if (ticks.empty()) ticks.push_back(lo);
  return ticks;
}

std::string tick_label(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  if (ec != std::errc()) return "?";
  return std::string(buf, ptr);
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_line_chart(const DataTable& data, const PlotSpec& spec) {
  const int xi = data.column_index(spec.x_column);
  const int yi = data.column_index(spec.y_column);
  if (xi < 0) throw ConfigError("unknown x column '" + spec.x_column + "'");
  if (yi < 0) throw ConfigError("unknown y column '" + spec.y_column + "'");
  int gi = -1;
  if (!spec.group_column.empty()) {
    gi = data.column_index(spec.group_column);
    if (gi < 0) throw ConfigError("unknown group column '" + spec.group_column + "'");
  }

  // Split rows into series, keeping first-appearance order.
  std::vector<Series> series;
  std::map<std::string, std::size_t> series_index;
  for (const auto& row : data.rows) {
    const std::string key = gi >= 0 ? row[gi] : std::string();
    auto it = series_index.find(key);
    std::size_t idx;
    if (it == series_index.end()) {
      idx = series.size();
      series_index.emplace(key, idx);
      series.push_back({key, {}});
    } else {
      idx = it->second;
    }
    const double x = parse_cell(row[xi], spec.x_column);
    const double y = parse_cell(row[yi], spec.y_column);
    if (spec.log_x && !(x > 0.0)) continue;
    if (spec.log_y && !(y > 0.0)) continue;
    series[idx].points.emplace_back(x, y);
  }
  if (series.empty()) throw ConfigError("no rows to plot");
  for (const auto& s : series) {
    if (s.points.empty()) {
      throw ConfigError("group '" + s.label + "' has no drawable points");
    }
  }

  Axis ax{1e300, -1e300, spec.log_x};
  Axis ay{1e300, -1e300, spec.log_y};
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      ax.lo = std::min(ax.lo, x);
      ax.hi = std::max(ax.hi, x);
      ay.lo = std::min(ay.lo, y);
      ay.hi = std::max(ay.hi, y);
    }
  }
  if (ax.lo == ax.hi) {
    ax.lo -= 0.5;
    ax.hi += 0.5;
  }
  if (ay.lo == ay.hi) {
    const double pad = ay.lo == 0.0 ? 0.5 : std::abs(ay.lo) * 0.5;
    ay.lo -= pad;
    ay.hi += pad;
  }
  if (!spec.log_y) {
    const double pad = 0.05 * (ay.hi - ay.lo);
    ay.lo -= pad;
    ay.hi += pad;
  }

  const double px_lo = kLeft, px_hi = kWidth - kRight;
  const double py_lo = kHeight - kBottom, py_hi = kTop;  // y grows upward

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "viewBox=\"0 0 800 600\">\n"
      << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";

  if (!spec.title.empty()) {
    svg << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">"
        << xml_escape(spec.title) << "</text>\n";
  }

  // Frame.
  svg << "<rect x=\"" << format_coordinate(kLeft) << "\" y=\"" << format_coordinate(kTop)
      << "\" width=\"" << format_coordinate(px_hi - px_lo) << "\" height=\""
      << format_coordinate(py_lo - py_hi)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  const auto x_ticks = spec.log_x ? log_ticks(ax.lo, ax.hi) : linear_ticks(ax.lo, ax.hi);
  for (double v : x_ticks) {
    const double px = ax.map(v, px_lo, px_hi);
    svg << "<line x1=\"" << format_coordinate(px) << "\" y1=\"" << format_coordinate(py_lo)
        << "\" x2=\"" << format_coordinate(px) << "\" y2=\"" << format_coordinate(py_hi)
        << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    svg << "<text x=\"" << format_coordinate(px) << "\" y=\""
        << format_coordinate(py_lo + 18.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << tick_label(v) << "</text>\n";
  }
  const auto y_ticks = spec.log_y ? log_ticks(ay.lo, ay.hi) : linear_ticks(ay.lo, ay.hi);
  for (double v : y_ticks) {
    const double py = ay.map(v, py_lo, py_hi);
    svg << "<line x1=\"" << format_coordinate(px_lo) << "\" y1=\"" << format_coordinate(py)
        << "\" x2=\"" << format_coordinate(px_hi) << "\" y2=\"" << format_coordinate(py)
        << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    svg << "<text x=\"" << format_coordinate(px_lo - 6.0) << "\" y=\""
        << format_coordinate(py + 4.0)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << tick_label(v) << "</text>\n";
  }

  // Axis labels.
  svg << "<text x=\"" << format_coordinate(0.5 * (px_lo + px_hi)) << "\" y=\""
      << format_coordinate(kHeight - 14.0)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << xml_escape(spec.x_column) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << format_coordinate(0.5 * (py_lo + py_hi))
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << format_coordinate(0.5 * (py_lo + py_hi)) << ")\">" << xml_escape(spec.y_column)
      << "</text>\n";

  // Series.
  for (std::size_t s = 0; s < series.size(); ++s) {
    svg << "<polyline fill=\"none\" stroke=\"" << kPalette[s % kPaletteSize]
        << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& [x, y] : series[s].points) {
      if (!first) svg << ' ';
      first = false;
      svg << format_coordinate(ax.map(x, px_lo, px_hi)) << ','
          << format_coordinate(ay.map(y, py_lo, py_hi));
    }
    svg << "\"/>\n";
  }

  // Legend (only for grouped plots).
  if (gi >= 0) {
    const double lx = px_hi - 150.0;
    double ly = kTop + 12.0;
    for (std::size_t s = 0; s < series.size(); ++s) {
      svg << "<line x1=\"" << format_coordinate(lx) << "\" y1=\""
          << format_coordinate(ly - 4.0) << "\" x2=\"" << format_coordinate(lx + 24.0)
          << "\" y2=\"" << format_coordinate(ly - 4.0) << "\" stroke=\""
          << kPalette[s % kPaletteSize] << "\" stroke-width=\"1.5\"/>\n";
      svg << "<text x=\"" << format_coordinate(lx + 30.0) << "\" y=\""
          << format_coordinate(ly)
          << "\" font-family=\"sans-serif\" font-size=\"11\">"
          << xml_escape(spec.group_column + " = " + series[s].label) << "</text>\n";
      ly += 16.0;
    }
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace eitbec::cli
