#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "uavsg/config_io.hpp"
#include "uavsg/error.hpp"

namespace uavsg {

/// A result table: `#` metadata lines, a header row and string cells.
struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_meta(std::string key, std::string value) { meta.emplace_back(std::move(key), std::move(value)); }

  void add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw ValidationError("Table::add_row: column count mismatch");
    rows.push_back(std::move(row));
  }

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw ValidationError("Table: no column '" + name + "'");
  }
};

/// Fixed-format cell for a double: 10 significant digits, `inf`, `nan`.
inline std::string cell(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string cell(long long v) { return std::to_string(v); }

/// RFC 4180 quoting for fields with separators, quotes or line breaks.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_csv(std::ostream& os, const Table& t) {
  for (const auto& [k, v] : t.meta) {
    std::istringstream lines(v);
    std::string line;
    bool first = true;
    while (std::getline(lines, line)) {
      os << "# " << k << (first ? ": " : "+ ") << line << "\r\n";
      first = false;
    }
    if (first) os << "# " << k << ":\r\n";
  }
  auto row = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
    os << "\r\n";
  };
  row(t.columns);
  for (const auto& r : t.rows) row(r);
}

inline std::string to_csv(const Table& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

/// Parses the body of a CSV produced by write_csv (metadata lines skipped).
inline Table parse_csv(const std::string& text) {
  Table t;
  std::size_t i = 0;
  std::vector<std::vector<std::string>> records;
  while (i < text.size()) {
    if (text[i] == '#') {
      const auto nl = text.find('\n', i);
      std::string line = text.substr(i + 2, nl == std::string::npos ? std::string::npos : nl - i - 2);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto colon = line.find(": ");
      const auto plus = line.find("+ ");
      if (plus != std::string::npos && (colon == std::string::npos || plus < colon) && !t.meta.empty() &&
          t.meta.back().first == line.substr(0, plus)) {
        t.meta.back().second += "\n" + line.substr(plus + 2);
      } else if (colon != std::string::npos) {
        t.add_meta(line.substr(0, colon), line.substr(colon + 2));
      } else if (line.size() >= 1 && line.back() == ':') {
        t.add_meta(line.substr(0, line.size() - 1), "");
      }
      i = nl == std::string::npos ? text.size() : nl + 1;
      continue;
    }
    std::vector<std::string> rec;
    std::string field;
    bool quoted = false;
    for (;;) {
      if (i >= text.size()) {
        rec.push_back(field);
        break;
      }
      const char c = text[i];
      if (quoted) {
        if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          i += 2;
        } else if (c == '"') {
          quoted = false;
          ++i;
        } else {
          field += c;
          ++i;
        }
      } else if (c == '"') {
        quoted = true;
        ++i;
      } else if (c == ',') {
        rec.push_back(field);
        field.clear();
        ++i;
      } else if (c == '\r' || c == '\n') {
        rec.push_back(field);
        i += (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ? 2 : 1;
        break;
      } else {
        field += c;
        ++i;
      }
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw ParseError("parse_csv: no header row");
  t.columns = records.front();
  for (std::size_t r = 1; r < records.size(); ++r) t.add_row(records[r]);
  return t;
}

}  // namespace uavsg
