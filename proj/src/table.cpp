#include "raresim/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "raresim/errors.hpp"

namespace raresim {

void ResultTable::add_row(std::vector<double> row, std::string tag) {
  rows.push_back(std::move(row));
  row_tags.push_back(std::move(tag));
}

void ResultTable::validate() const {
  for (const auto& r : rows)
    if (r.size() != columns.size())
      throw Error("result table: ragged row");
  if (!row_tags.empty() && row_tags.size() != rows.size())
    throw Error("result table: row tag count mismatch");
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

void write_csv(const ResultTable& table, std::ostream& out) {
  table.validate();
  for (const auto& [key, value] : table.metadata)
    out << "# " << key << ": " << value << "\n";

  bool any_tag = std::any_of(table.row_tags.begin(), table.row_tags.end(),
                             [](const std::string& t) { return !t.empty(); });

  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << ",";
    out << table.columns[c];
  }
  if (any_tag) out << ",error";
  out << "\n";

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ",";
      out << format_double(row[c]);
    }
    if (any_tag) {
      std::string tag = table.row_tags.empty() ? "" : table.row_tags[r];
      std::replace(tag.begin(), tag.end(), ',', ';');
      out << "," << tag;
    }
    out << "\n";
  }
}

void write_csv_file(const ResultTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  write_csv(table, out);
}

namespace {

struct Extent {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void include(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  bool ok() const { return lo < hi; }
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#ff7f0e", "#9467bd", "#8c564b"};

}  // namespace

void write_svg_file(const ResultTable& table,
                    const std::vector<std::size_t>& y_columns,
                    const std::string& title, const std::string& path,
                    bool log_x, bool log_y) {
  table.validate();
  if (table.columns.empty() || table.rows.empty())
    throw Error("svg: empty table");

  const double width = 820, height = 520;
  const double ml = 80, mr = 170, mt = 45, mb = 55;
  const double pw = width - ml - mr, ph = height - mt - mb;

  auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };

  Extent ex, ey;
  for (const auto& row : table.rows) {
    double x = tx(row[0]);
    if (std::isfinite(x)) ex.include(x);
    for (auto c : y_columns) {
      double y = ty(row[c]);
      if (std::isfinite(y)) ey.include(y);
    }
  }
  if (!ex.ok()) {
    ex.lo -= 1;
    ex.hi = ex.lo + 2;
  }
  if (!ey.ok()) {
    ey.lo = std::isfinite(ey.lo) ? ey.lo - 1 : 0;
    ey.hi = ey.lo + 2;
  }
  double padding = 0.04 * (ey.hi - ey.lo);
  ey.lo -= padding;
  ey.hi += padding;

  auto px = [&](double v) { return ml + (tx(v) - ex.lo) / (ex.hi - ex.lo) * pw; };
  auto py = [&](double v) {
    return mt + ph - (ty(v) - ey.lo) / (ey.hi - ey.lo) * ph;
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "' viewBox='0 0 " << width << " "
      << height << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << ml << "' y='24' font-family='sans-serif' "
         "font-size='15'>"
      << title << "</text>\n";

  // axes
  out << "<rect x='" << ml << "' y='" << mt << "' width='" << pw
      << "' height='" << ph << "' fill='none' stroke='#444'/>\n";
  const int ticks = 6;
  for (int i = 0; i <= ticks; ++i) {
    double fxv = ex.lo + (ex.hi - ex.lo) * i / ticks;
    double fyv = ey.lo + (ey.hi - ey.lo) * i / ticks;
    double gx = ml + pw * i / ticks;
    double gy = mt + ph - ph * i / ticks;
    out << "<line x1='" << gx << "' y1='" << mt + ph << "' x2='" << gx
        << "' y2='" << mt + ph + 5 << "' stroke='#444'/>\n";
    out << "<text x='" << gx << "' y='" << mt + ph + 20
        << "' font-family='sans-serif' font-size='11' text-anchor='middle'>"
        << (log_x ? "1e" : "") << format_double(std::round(fxv * 1e4) / 1e4)
        << "</text>\n";
    out << "<line x1='" << ml - 5 << "' y1='" << gy << "' x2='" << ml
        << "' y2='" << gy << "' stroke='#444'/>\n";
    out << "<text x='" << ml - 8 << "' y='" << gy + 4
        << "' font-family='sans-serif' font-size='11' text-anchor='end'>"
        << (log_y ? "1e" : "") << format_double(std::round(fyv * 1e4) / 1e4)
        << "</text>\n";
  }
  out << "<text x='" << ml + pw / 2 << "' y='" << height - 12
      << "' font-family='sans-serif' font-size='13' text-anchor='middle'>"
      << table.columns[0] << "</text>\n";

  // series
  for (std::size_t s = 0; s < y_columns.size(); ++s) {
    const char* color = kPalette[s % 6];
    out << "<polyline fill='none' stroke='" << color
        << "' stroke-width='1.6' points='";
    for (const auto& row : table.rows) {
      double x = row[0];
      double y = row[y_columns[s]];
      if (!std::isfinite(tx(x)) || !std::isfinite(ty(y))) continue;
      out << px(x) << "," << py(y) << " ";
    }
    out << "'/>\n";
    double ly = mt + 18 + 18.0 * s;
    out << "<line x1='" << ml + pw + 10 << "' y1='" << ly << "' x2='"
        << ml + pw + 34 << "' y2='" << ly << "' stroke='" << color
        << "' stroke-width='2'/>\n";
    out << "<text x='" << ml + pw + 40 << "' y='" << ly + 4
        << "' font-family='sans-serif' font-size='11'>"
        << table.columns[y_columns[s]] << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace raresim
