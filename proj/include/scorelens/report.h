// scorelens/include/scorelens/report.h
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef SCORELENS_REPORT_H_
#define SCORELENS_REPORT_H_

#include <map>
#include <string>
#include <vector>

namespace scorelens {

// Fixed-decimal formatting for human-readable tables (machine outputs keep
// full precision through FormatDouble).
std::string FormatFixed(double v, int decimals);

struct TextTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Right-aligned columns, two-space gutter.
  std::string RenderText() const;
  std::string RenderCsv() const;
};

// FNV-1a over the file bytes, hex-encoded; stable digest for manifests.
std::string FileDigest(const std::string &path);

// Every run writes a manifest capturing tool version, subcommand, config and
// input/output digests so reports are reproducible.
void WriteManifest(const std::string &dir, const std::string &subcommand,
                   const std::map<std::string, std::string> &config,
                   const std::vector<std::string> &inputs,
                   const std::vector<std::string> &outputs);

extern const char *kToolVersion;

}  // namespace scorelens

#endif  // SCORELENS_REPORT_H_
