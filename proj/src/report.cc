// scorelens/src/report.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "scorelens/report.h"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scorelens/error.h"

namespace scorelens {

const char *kToolVersion = "scorelens 0.1.0";

std::string FormatFixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string TextTable::RenderText() const {
  std::vector<size_t> widths(header.size(), 0);
  for (size_t c = 0; c < header.size(); ++c) widths[c] = header[c].size();
  for (const auto &row : rows)
    for (size_t c = 0; c < row.size() && c < widths.size(); ++c)
      widths[c] = std::max(widths[c], row[c].size());
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string> &row) {
    for (size_t c = 0; c < widths.size(); ++c) {
      std::string cell = c < row.size() ? row[c] : "";
      out << std::string(widths[c] - cell.size(), ' ') << cell;
      if (c + 1 < widths.size()) out << "  ";
    }
    out << '\n';
  };
  emit(header);
  for (const auto &row : rows) emit(row);
  return out.str();
}

std::string TextTable::RenderCsv() const {
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string> &row) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << row[c];
    }
    out << '\n';
  };
  emit(header);
  for (const auto &row : rows) emit(row);
  return out.str();
}

std::string FileDigest(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for digest");
  std::uint64_t h = 1469598103934665603ULL;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(h));
  return hex;
}

void WriteManifest(const std::string &dir, const std::string &subcommand,
                   const std::map<std::string, std::string> &config,
                   const std::vector<std::string> &inputs,
                   const std::vector<std::string> &outputs) {
  nlohmann::json j;
  j["tool"] = kToolVersion;
  j["subcommand"] = subcommand;
  j["config"] = config;
  nlohmann::json in_digests, out_digests;
  for (const auto &p : inputs) in_digests[p] = FileDigest(p);
  for (const auto &p : outputs) out_digests[p] = FileDigest(p);
  j["inputs"] = in_digests;
  j["outputs"] = out_digests;
  std::string path = dir + "/manifest.json";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace scorelens
