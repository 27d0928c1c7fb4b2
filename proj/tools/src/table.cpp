#include "table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace qcomp::cli {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("table row width does not match the header");
  }
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::logic_error("no column " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

double Table::number(std::size_t row, std::size_t col) const {
  const Cell& c = rows.at(row).at(col);
  if (auto d = std::get_if<double>(&c)) return *d;
  if (auto i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  throw std::logic_error("non-numeric cell in column " + columns.at(col));
}

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::logic_error("to_chars failed");
  return std::string(buf, end);
}

namespace {

std::string cell_text(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return format_double(*d);
  if (auto i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

std::string xml_escape(const std::string& s) {
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

// Fixed-precision coordinate, locale independent.
std::string coord(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v,
                                 std::chars_format::fixed, 2);
  if (ec != std::errc{}) throw std::logic_error("to_chars failed");
  std::string s(buf, end);
  return s == "-0.00" ? "0.00" : s;
}

std::string tick(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v,
                                 std::chars_format::general, 4);
  if (ec != std::errc{}) throw std::logic_error("to_chars failed");
  return std::string(buf, end);
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#17becf",
                                    "#8c564b", "#e377c2"};

}  // namespace

void write_csv(std::ostream& os, const Table& t,
               const std::vector<std::string>& header) {
  for (const auto& h : header) os << "# " << h << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    os << (i ? "," : "") << t.columns[i];
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << cell_text(row[i]);
    }
    os << '\n';
  }
}

nlohmann::ordered_json table_to_json(const Table& t) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit([&](const auto& v) { obj[t.columns[i]] = v; }, row[i]);
    }
    rows.push_back(std::move(obj));
  }
  return {{"columns", t.columns}, {"rows", rows}};
}

void write_svg(std::ostream& os, const Table& t, const PlotSpec& spec) {
  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series;
  const std::size_t xc = t.column(spec.x);
  if (!spec.group_by.empty()) {
    const std::size_t gc = t.column(spec.group_by);
    const std::size_t yc = t.column(spec.y.at(0));
    std::map<double, std::size_t> index;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const double g = t.number(r, gc);
      auto [it, fresh] = index.emplace(g, series.size());
      if (fresh) series.push_back({spec.group_by + "=" + tick(g), {}});
      series[it->second].pts.emplace_back(t.number(r, xc), t.number(r, yc));
    }
  } else {
    for (const auto& y : spec.y) {
      const std::size_t yc = t.column(y);
      Series s{y, {}};
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        s.pts.emplace_back(t.number(r, xc), t.number(r, yc));
      }
      series.push_back(std::move(s));
    }
  }

  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool first = true;
  auto widen = [&](double x, double y) {
    if (first) {
      x0 = x1 = x;
      y0 = y1 = y;
      first = false;
    }
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  };
  for (const auto& s : series) {
    for (auto [x, y] : s.pts) widen(x, y);
  }
  for (const auto& g : spec.guides) widen(x0, g.first);
  y0 = std::min(y0, 0.0);
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  y1 += 0.05 * (y1 - y0);

  constexpr double W = 640, H = 420, L = 70, R = 150, T = 40, B = 50;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << coord(W)
     << "\" height=\"" << coord(H) << "\" font-family=\"sans-serif\" "
     << "font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << coord(W / 2) << "\" y=\"22\" text-anchor=\"middle\" "
     << "font-size=\"14\">" << xml_escape(spec.title) << "</text>\n";
  // axes
  os << "<line x1=\"" << coord(L) << "\" y1=\"" << coord(H - B) << "\" x2=\""
     << coord(W - R) << "\" y2=\"" << coord(H - B) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << coord(L) << "\" y1=\"" << coord(T) << "\" x2=\""
     << coord(L) << "\" y2=\"" << coord(H - B) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0;
    const double yv = y0 + (y1 - y0) * i / 5.0;
    os << "<text x=\"" << coord(px(xv)) << "\" y=\"" << coord(H - B + 16)
       << "\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
    os << "<text x=\"" << coord(L - 6) << "\" y=\"" << coord(py(yv) + 4)
       << "\" text-anchor=\"end\">" << tick(yv) << "</text>\n";
  }
  os << "<text x=\"" << coord((L + W - R) / 2) << "\" y=\"" << coord(H - 12)
     << "\" text-anchor=\"middle\">" << xml_escape(spec.x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << coord((T + H - B) / 2)
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << coord((T + H - B) / 2) << ")\">" << xml_escape(spec.y_label)
     << "</text>\n";

  for (const auto& g : spec.guides) {
    os << "<line x1=\"" << coord(L) << "\" y1=\"" << coord(py(g.first))
       << "\" x2=\"" << coord(W - R) << "\" y2=\"" << coord(py(g.first))
       << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    os << "<text x=\"" << coord(W - R + 4) << "\" y=\""
       << coord(py(g.first) + 4) << "\" fill=\"gray\">" << xml_escape(g.second)
       << "</text>\n";
  }

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* colour = kPalette[i % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << colour
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < series[i].pts.size(); ++k) {
      const auto [x, y] = series[i].pts[k];
      os << (k ? " " : "") << coord(px(x)) << ',' << coord(py(y));
    }
    os << "\"/>\n";
    const double ly = T + 16.0 * static_cast<double>(i);
    os << "<line x1=\"" << coord(W - R + 10) << "\" y1=\"" << coord(ly + 40)
       << "\" x2=\"" << coord(W - R + 30) << "\" y2=\"" << coord(ly + 40)
       << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << coord(W - R + 34) << "\" y=\"" << coord(ly + 44)
       << "\">" << xml_escape(series[i].name) << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace qcomp::cli
