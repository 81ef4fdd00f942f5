// SPDX-License-Identifier: Apache-2.0
//
// ccss -- cooperative spectrum sensing toolkit
#ifndef CCSS_TABLE_HPP_
#define CCSS_TABLE_HPP_

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace ccss {
namespace table {

/// Numeric result table with a fixed header. Values are printed with nine
/// significant digits so identical runs emit identical bytes.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> r) {
    if (r.size() != columns.size())
      throw std::invalid_argument("Table: row width mismatch");
    rows.push_back(std::move(r));
  }
};

inline std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    os << (c ? "," : "") << t.columns[c];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      os << (c ? "," : "") << format_value(row[c]);
    os << "\n";
  }
}

inline void write_json(const Table& t, std::ostream& os) {
  os << "{\n  \"name\": \"" << t.name << "\",\n  \"columns\": [";
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    os << (c ? ", " : "") << "\"" << t.columns[c] << "\"";
  os << "],\n  \"rows\": [\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << "    [";
    for (std::size_t c = 0; c < t.rows[r].size(); ++c)
      os << (c ? ", " : "") << format_value(t.rows[r][c]);
    os << "]" << (r + 1 < t.rows.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
}

}  // namespace table
}  // namespace ccss

#endif  // CCSS_TABLE_HPP_
