#pragma once

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lrsep {

// Round-trippable decimal form of a double.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using CsvCell = std::variant<std::string, std::int64_t, double>;

inline std::string format_cell(const CsvCell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return format_double(std::get<double>(c));
}

// Comma-separated output: one '#' line echoing the configuration, one header
// row, then data rows.
class CsvWriter {
 public:
  CsvWriter(const std::vector<std::pair<std::string, std::string>>& config,
            const std::vector<std::string>& columns)
      : width_(columns.size()) {
    out_ << '#';
    for (const auto& [k, v] : config) out_ << ' ' << k << '=' << v;
    out_ << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
  }

  void row(const std::vector<CsvCell>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << format_cell(cells[i]);
    out_ << '\n';
  }

  std::size_t width() const { return width_; }
  std::string str() const { return out_.str(); }

 private:
  std::size_t width_;
  std::ostringstream out_;
};

struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return header.size();
  }
};

// Reader for the format written above; used by tests and downstream tools.
inline CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line);
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (t.header.empty()) t.header = std::move(fields);
    else t.rows.push_back(std::move(fields));
  }
  return t;
}

}  // namespace lrsep
