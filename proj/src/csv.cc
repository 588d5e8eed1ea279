// scorelens/src/csv.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "scorelens/csv.h"

#include <charconv>
#include <fstream>
#include <limits>

#include "scorelens/error.h"

namespace scorelens {

int CsvTable::column(const std::string &name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

std::vector<std::string> SplitLine(const std::string &line, char delimiter) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = line.find(delimiter, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace

CsvTable ReadCsv(const std::string &path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file '" + path + "'");
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = SplitLine(line, delimiter);
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  if (first) throw IoError("file '" + path + "' has no header row");
  return table;
}

void WriteCsv(const std::string &path, const std::vector<std::string> &header,
              const std::vector<std::vector<std::string>> &rows,
              char delimiter) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file '" + path + "'");
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out << delimiter;
    out << header[i];
  }
  out << '\n';
  for (const auto &row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << delimiter;
      out << row[i];
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string FormatDouble(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::optional<double> ParseDouble(const std::string &s) {
  if (s.empty()) return std::nullopt;
  const char *begin = s.data();
  const char *end = s.data() + s.size();
  double value = 0.0;
  auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    // from_chars does not accept leading '+' or "inf"/"nan" spellings we
    // still want to recognize as numeric (and then reject as non-finite).
    if (s == "inf" || s == "+inf" || s == "-inf" || s == "nan")
      return s[0] == '-' ? -std::numeric_limits<double>::infinity()
             : s == "nan" ? std::numeric_limits<double>::quiet_NaN()
                          : std::numeric_limits<double>::infinity();
    return std::nullopt;
  }
  return value;
}

}  // namespace scorelens
