// scorelens/src/catalog.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "scorelens/catalog.h"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scorelens/error.h"

namespace scorelens {

std::string StatName(StatKind kind) {
  return kind == StatKind::kMean ? "mean" : "std";
}

StatKind ParseStatName(const std::string &name) {
  if (name == "mean") return StatKind::kMean;
  if (name == "std") return StatKind::kStd;
  throw ConfigError("unknown summary statistic '" + name +
                    "' (expected 'mean' or 'std')");
}

std::string ColumnLabel(const Column &c) {
  return c.feature + ":" + StatName(c.stat);
}

std::string ColumnHeader(const Column &c) {
  return c.feature + "_" + StatName(c.stat);
}

Column ParseColumnLabel(const std::string &label) {
  // The separator is the last ':' or '_' so feature names may contain '-'.
  size_t pos = label.find_last_of(":_");
  if (pos == std::string::npos || pos == 0 || pos + 1 >= label.size())
    throw ConfigError("malformed column label '" + label +
                      "' (expected '<feature>:<mean|std>')");
  return Column{label.substr(0, pos), ParseStatName(label.substr(pos + 1))};
}

FeatureCatalog::FeatureCatalog(std::vector<FeatureId> features,
                               std::vector<FeatureGroup> groups)
    : features_(std::move(features)), groups_(std::move(groups)) {
  if (features_.empty()) throw ConfigError("empty catalog");
  std::set<std::string> names;
  for (const auto &f : features_) {
    if (f.name.empty()) throw ConfigError("feature with empty name");
    if (!names.insert(f.name).second)
      throw ConfigError("duplicate feature name '" + f.name + "'");
  }
  for (const auto &f : features_) {
    for (StatKind s : {StatKind::kMean, StatKind::kStd}) {
      Column c{f.name, s};
      column_lookup_[ColumnLabel(c)] = static_cast<int>(columns_.size());
      columns_.push_back(c);
    }
  }
  // Every column belongs to at most one group; groups are nonempty and
  // reference catalog columns only.
  std::set<std::string> group_names;
  std::set<std::string> assigned;
  for (const auto &g : groups_) {
    if (!group_names.insert(g.name).second)
      throw ConfigError("duplicate group name '" + g.name + "'");
    if (g.members.empty()) throw ConfigError("empty group '" + g.name + "'");
    for (const auto &m : g.members) {
      std::string label = ColumnLabel(m);
      if (column_lookup_.find(label) == column_lookup_.end())
        throw ConfigError("group '" + g.name + "' references unknown column '" +
                          label + "'");
      if (!assigned.insert(label).second)
        throw ConfigError("duplicate group membership for column '" + label +
                          "'");
    }
  }
}

int FeatureCatalog::column_index(const std::string &feature,
                                 StatKind stat) const {
  auto it = column_lookup_.find(ColumnLabel(Column{feature, stat}));
  return it == column_lookup_.end() ? -1 : it->second;
}

bool FeatureCatalog::has_group(const std::string &name) const {
  for (const auto &g : groups_)
    if (g.name == name) return true;
  return false;
}

const FeatureGroup &FeatureCatalog::group(const std::string &name) const {
  for (const auto &g : groups_)
    if (g.name == name) return g;
  throw ConfigError("unknown feature group '" + name + "'");
}

namespace {

std::vector<Column> BothStats(const std::vector<std::string> &features) {
  std::vector<Column> cols;
  for (const auto &f : features) {
    cols.push_back({f, StatKind::kMean});
    cols.push_back({f, StatKind::kStd});
  }
  return cols;
}

}  // namespace

FeatureCatalog DefaultCatalog() {
  std::vector<FeatureId> features = {
      {"F0", "semitone"},
      {"Loudness", "sone"},
      {"Jitter", "%"},
      {"Shimmer", "dB"},
      {"HNR", "dB"},
      {"H1-H2", "dB"},
      {"H1-A3", "dB"},
      {"F1", "Hz"}, {"F2", "Hz"}, {"F3", "Hz"}, {"F4", "Hz"},
      {"B1", "Hz"}, {"B2", "Hz"}, {"B3", "Hz"}, {"B4", "Hz"},
      {"A1", "dB"}, {"A2", "dB"}, {"A3", "dB"}, {"A4", "dB"},
      {"SpectralFlux", ""},
      {"VoicedSegPerSec", "1/s"},
      {"VoicedSegLength", "s"},
      {"UnvoicedSegLength", "s"},
  };
  std::vector<FeatureGroup> groups = {
      {"F0", BothStats({"F0"})},
      {"VQ", BothStats({"Loudness", "Jitter", "Shimmer", "HNR", "H1-H2",
                        "H1-A3"})},
      {"Formant1", BothStats({"F1", "B1", "A1"})},
      {"Formant2", BothStats({"F2", "B2", "A2"})},
      {"Formant3", BothStats({"F3", "B3", "A3"})},
      {"Formant4", BothStats({"F4", "B4", "A4"})},
      {"SpectralFlux", BothStats({"SpectralFlux"})},
      {"Temporal", BothStats({"VoicedSegPerSec", "VoicedSegLength",
                              "UnvoicedSegLength"})},
  };
  return FeatureCatalog(std::move(features), std::move(groups));
}

FeatureCatalog LoadCustomCatalog(const std::string &json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError(std::string("catalog config is not valid JSON: ") +
                      e.what());
  }
  if (!doc.is_object() || !doc.contains("features"))
    throw ConfigError("catalog config must contain a 'features' list");
  std::vector<FeatureId> features;
  for (const auto &f : doc["features"]) {
    features.push_back(
        {f.at("name").get<std::string>(), f.value("unit", std::string())});
  }
  std::vector<FeatureGroup> groups;
  if (doc.contains("groups")) {
    for (const auto &g : doc["groups"]) {
      FeatureGroup grp;
      grp.name = g.at("name").get<std::string>();
      for (const auto &m : g.at("members"))
        grp.members.push_back(ParseColumnLabel(m.get<std::string>()));
      groups.push_back(std::move(grp));
    }
  }
  return FeatureCatalog(std::move(features), std::move(groups));
}

FeatureCatalog LoadCatalogFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open catalog file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return LoadCustomCatalog(ss.str());
}

}  // namespace scorelens
