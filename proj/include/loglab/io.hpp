#ifndef LOGLAB_IO_HPP
#define LOGLAB_IO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

namespace loglab {

using json = nlohmann::ordered_json;

struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  json provenance;  // seed, config hash, version, marks

  void add_row(std::initializer_list<double> values) { rows.emplace_back(values); }
};

inline std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Fixed %.12g formatting keeps CSV bodies byte-identical across reruns.
inline void write_csv(const ResultTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  for (size_t j = 0; j < table.columns.size(); ++j)
    out << (j ? "," : "") << table.columns[j];
  out << "\n";
  for (const auto& row : table.rows) {
    for (size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_value(row[j]);
    out << "\n";
  }
}

inline std::uint64_t fnv1a_hash(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline void write_sidecar(const json& provenance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_sidecar: cannot open " + path);
  out << provenance.dump(2) << "\n";
}

// Minimal SVG polyline chart; output display only, never gates results.
struct SvgSeries {
  std::string label;
  std::string color = "#1f6fb4";
  std::vector<double> x, y;
};

inline void write_svg_chart(const std::string& path, const std::string& title,
                            const std::vector<SvgSeries>& series, bool log_x = false) {
  const double width = 720, height = 480, margin = 60;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto tx = [&](double v) { return log_x ? std::log10(std::max(v, 1e-300)) : v; };
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, tx(s.x[i]));
      xmax = std::max(xmax, tx(s.x[i]));
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  auto px = [&](double v) { return margin + (tx(v) - xmin) / (xmax - xmin) * (width - 2 * margin); };
  auto py = [&](double v) { return height - margin - (v - ymin) / (ymax - ymin) * (height - 2 * margin); };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_svg_chart: cannot open " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
      << "</text>\n";
  out << "<line x1='" << margin << "' y1='" << height - margin << "' x2='" << width - margin
      << "' y2='" << height - margin << "' stroke='black'/>\n";
  out << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin << "' y2='"
      << height - margin << "' stroke='black'/>\n";
  int li = 0;
  for (const auto& s : series) {
    out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
    for (size_t i = 0; i < s.x.size(); ++i) out << px(s.x[i]) << "," << py(s.y[i]) << " ";
    out << "'/>\n";
    out << "<text x='" << width - margin + 4 << "' y='" << margin + 16 * li++ << "' fill='"
        << s.color << "' font-size='12'>" << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace loglab

#endif  // LOGLAB_IO_HPP
