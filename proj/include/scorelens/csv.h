// scorelens/include/scorelens/csv.h
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef SCORELENS_CSV_H_
#define SCORELENS_CSV_H_

#include <optional>
#include <string>
#include <vector>

namespace scorelens {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int column(const std::string &name) const;  // -1 if absent
};

// Plain delimiter-separated text, no quoting, UTF-8, header row required.
CsvTable ReadCsv(const std::string &path, char delimiter = ',');

void WriteCsv(const std::string &path,
              const std::vector<std::string> &header,
              const std::vector<std::vector<std::string>> &rows,
              char delimiter = ',');

// Shortest round-trip decimal representation.
std::string FormatDouble(double v);
// Strict full-string parse; nullopt on anything non-numeric.
std::optional<double> ParseDouble(const std::string &s);

}  // namespace scorelens

#endif  // SCORELENS_CSV_H_
