#pragma once

// Tabular results shared by the CSV, JSON and SVG writers. The SVG plot is
// always drawn from a Table, never from a separate computation.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qcomp::cli {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, std::size_t col) const;
};

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_double(double v);

/// RFC 4180-ish CSV with LF line endings; optional "# key=value" header
/// lines come first.
void write_csv(std::ostream& os, const Table& t,
               const std::vector<std::string>& header = {});

nlohmann::ordered_json table_to_json(const Table& t);

struct PlotSpec {
  std::string title;
  std::string x;                  ///< column on the horizontal axis
  std::vector<std::string> y;     ///< one line per column...
  std::string group_by;           ///< ...or one line per distinct value here
  std::string x_label;
  std::string y_label;
  /// Horizontal reference lines (value, label), drawn dashed.
  std::vector<std::pair<double, std::string>> guides;
};

void write_svg(std::ostream& os, const Table& t, const PlotSpec& spec);

}  // namespace qcomp::cli
