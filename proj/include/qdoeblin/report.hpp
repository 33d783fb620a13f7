#pragma once

// CSV tables and minimal self-contained SVG line plots.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qdoeblin/channel_io.hpp"
#include "qdoeblin/doeblin.hpp"

namespace qdoeblin {

/// Rounded to 1e-9, printed with 9 significant digits.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  double r = std::round(v * 1e9) / 1e9;
  if (r == 0.0) r = 0.0;  // drop negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", r);
  return buf;
}

inline std::string format_value(const CoefficientResult& r) {
  return r.not_applicable ? "nan_not_ppt" : format_number(r.value);
}

inline std::string format_status(const CoefficientResult& r) {
  return r.not_applicable ? "not_applicable" : to_string(r.status);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InvalidInput("no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
  double number(std::size_t row, const std::string& name) const {
    const std::string& s = rows.at(row).at(column(name));
    if (s == "nan_not_ppt") return std::numeric_limits<double>::quiet_NaN();
    return std::stod(s);
  }
};

inline void write_csv(const Table& t, std::ostream& os) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

inline void write_csv_file(const Table& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_csv(t, out);
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline Table read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  Table t;
  std::string line;
  if (std::getline(in, line)) t.header = split(line);
  while (std::getline(in, line))
    if (!line.empty()) t.rows.push_back(split(line));
  return t;
}

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;  ///< NaN y values break the line
  bool dashed = false;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

namespace detail {

inline std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fixed(double v, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace detail

inline std::string render_svg(const LinePlot& plot) {
  constexpr double width = 640, height = 420;
  constexpr double left = 70, right = 170, top = 40, bottom = 60;
  double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
  for (const auto& s : plot.series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!(xmin <= xmax)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax - xmin < 1e-12) xmin -= 0.5, xmax += 0.5;
  if (ymax - ymin < 1e-12) ymin -= 0.5, ymax += 0.5;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  const double pw = width - left - right, ph = height - top - bottom;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#000000",
                                  "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
                                  "#7f7f7f", "#bcbd22", "#17becf"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
     << detail::svg_escape(plot.title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    const double yv = ymin + (ymax - ymin) * i / 5.0;
    os << "<line x1=\"" << detail::fixed(sx(xv)) << "\" y1=\"" << top + ph << "\" x2=\""
       << detail::fixed(sx(xv)) << "\" y2=\"" << top + ph + 5 << "\" stroke=\"black\"/>"
       << "<text x=\"" << detail::fixed(sx(xv)) << "\" y=\"" << top + ph + 20
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
       << detail::fixed(xv, 3) << "</text>\n";
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << detail::fixed(sy(yv)) << "\" x2=\"" << left
       << "\" y2=\"" << detail::fixed(sy(yv)) << "\" stroke=\"black\"/>"
       << "<text x=\"" << left - 8 << "\" y=\"" << detail::fixed(sy(yv) + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
       << detail::fixed(yv, 3) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
     << detail::svg_escape(plot.x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 18 " << top + ph / 2
     << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
     << detail::svg_escape(plot.y_label) << "</text>\n";

  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const Series& s = plot.series[k];
    const char* color = palette[k % (sizeof palette / sizeof *palette)];
    std::string pts;
    auto flush = [&] {
      if (pts.empty()) return;
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
         << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"" << pts << "\"/>\n";
      pts.clear();
    };
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(y)) {
        flush();
        continue;
      }
      pts += detail::fixed(sx(x)) + "," + detail::fixed(sy(y)) + " ";
    }
    flush();
    const double ly = top + 14 + 18.0 * double(k);
    os << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 35
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\""
       << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>"
       << "<text x=\"" << left + pw + 40 << "\" y=\"" << ly + 4
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << detail::svg_escape(s.name)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline void write_svg_file(const LinePlot& plot, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << render_svg(plot);
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace qdoeblin
