// scorelens/include/scorelens/catalog.h
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef SCORELENS_CATALOG_H_
#define SCORELENS_CATALOG_H_

#include <map>
#include <string>
#include <vector>

namespace scorelens {

// Each acoustic feature contributes two summary columns: its utterance-level
// mean and standard deviation.
enum class StatKind { kMean, kStd };

std::string StatName(StatKind kind);             // "mean" / "std"
StatKind ParseStatName(const std::string &name); // throws ConfigError

struct FeatureId {
  std::string name;
  std::string unit;  // metadata only; never converted inside the model
};

// One summary column: a (feature, statistic) pair.
struct Column {
  std::string feature;
  StatKind stat;
  bool operator==(const Column &o) const {
    return feature == o.feature && stat == o.stat;
  }
};

// Label used everywhere columns are named: "<feature>:<mean|std>".
std::string ColumnLabel(const Column &c);
// CSV header form: "<feature>_<mean|std>".
std::string ColumnHeader(const Column &c);
Column ParseColumnLabel(const std::string &label);  // accepts ":" or "_"

struct FeatureGroup {
  std::string name;
  std::vector<Column> members;
};

// Immutable after construction; safe to share across threads.
class FeatureCatalog {
 public:
  FeatureCatalog(std::vector<FeatureId> features,
                 std::vector<FeatureGroup> groups);

  const std::vector<FeatureId> &features() const { return features_; }
  const std::vector<FeatureGroup> &groups() const { return groups_; }

  // All summary columns in catalog order (feature-major, mean before std).
  const std::vector<Column> &columns() const { return columns_; }
  int num_columns() const { return static_cast<int>(columns_.size()); }

  // Index into columns() for a (feature, stat) pair; -1 if absent.
  int column_index(const std::string &feature, StatKind stat) const;
  int column_index(const Column &c) const {
    return column_index(c.feature, c.stat);
  }
  bool has_group(const std::string &name) const;
  const FeatureGroup &group(const std::string &name) const;

 private:
  std::vector<FeatureId> features_;
  std::vector<FeatureGroup> groups_;
  std::vector<Column> columns_;
  std::map<std::string, int> column_lookup_;  // label -> index
};

// The default 23-feature catalog with its 8 feature groups
// (F0, VQ, Formant 1-4, SpectralFlux, Temporal).
FeatureCatalog DefaultCatalog();

// Parse a catalog from a JSON configuration document:
//   {"features": [{"name": "...", "unit": "..."}],
//    "groups":   [{"name": "...", "members": ["<feature>:<mean|std>", ...]}]}
FeatureCatalog LoadCustomCatalog(const std::string &json_text);
FeatureCatalog LoadCatalogFile(const std::string &path);

}  // namespace scorelens

#endif  // SCORELENS_CATALOG_H_
