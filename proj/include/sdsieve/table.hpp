#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace sdsieve {

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Rows of strings with a header; emitted as RFC-4180-style CSV (LF line
// endings) or as a JSON array of objects.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }

  void emit_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(header[i]);
    }
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(row[i]);
      }
      out << '\n';
    }
  }
};

}  // namespace sdsieve
