// scorelens/src/predictors.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "scorelens/predictors.h"

#include <cmath>
#include <map>
#include <set>

#include "scorelens/csv.h"
#include "scorelens/error.h"

namespace scorelens {

Standardizer FitStandardizer(const std::vector<const UtteranceSummary *> &utts,
                             const FeatureCatalog &catalog) {
  int ncols = catalog.num_columns();
  size_t n = utts.size();
  if (n < 2) throw StatError("standardizer needs at least 2 utterances");
  Standardizer std;
  std.mean.assign(ncols, 0.0);
  std.sd.assign(ncols, 0.0);
  std.kept.assign(ncols, false);
  for (int c = 0; c < ncols; ++c) {
    long double sum = 0.0L;
    for (const auto *u : utts) sum += u->values[c];
    double mean = static_cast<double>(sum / n);
    long double ss = 0.0L;
    for (const auto *u : utts) {
      double d = u->values[c] - mean;
      ss += d * d;
    }
    double sd = std::sqrt(static_cast<double>(ss / (n - 1)));
    std.mean[c] = mean;
    if (sd > 0.0 && std::isfinite(sd)) {
      std.sd[c] = sd;
      std.kept[c] = true;
    } else {
      std.dropped_columns.push_back(ColumnLabel(catalog.columns()[c]));
    }
  }
  return std;
}

Eigen::VectorXd DistanceFeatures(const UtteranceSummary &enroll,
                                 const UtteranceSummary &test,
                                 const Standardizer &std) {
  if (!enroll.complete || !test.complete)
    throw StatError("distance over incomplete utterance '" +
                    (enroll.complete ? test.utterance_id
                                     : enroll.utterance_id) +
                    "'");
  int ncols = static_cast<int>(std.mean.size());
  Eigen::VectorXd d(ncols);
  for (int c = 0; c < ncols; ++c) {
    d[c] = std.kept[c] ? std::fabs(std.Standardize(c, enroll.values[c]) -
                                   std.Standardize(c, test.values[c]))
                       : 0.0;
  }
  return d;
}

Eigen::VectorXd GroupSum(const Eigen::VectorXd &distances,
                         const FeatureCatalog &catalog,
                         const Standardizer &std,
                         std::vector<std::string> *skipped) {
  const auto &groups = catalog.groups();
  Eigen::VectorXd out(groups.size());
  for (size_t g = 0; g < groups.size(); ++g) {
    double sum = 0.0;
    for (const auto &m : groups[g].members) {
      int c = catalog.column_index(m);
      if (c < 0 || !std.kept[c]) {
        if (skipped)
          skipped->push_back(groups[g].name + " <- " + ColumnLabel(m));
        continue;
      }
      sum += distances[c];
    }
    out[g] = sum;
  }
  return out;
}

namespace {

void CheckDesignShape(int rows, int cols) {
  if (cols == 0) throw ConfigError("empty predictor selection");
  if (rows < cols + 2)
    throw StatError("insufficient rows: " + std::to_string(rows) +
                    " trials for " + std::to_string(cols) + " predictors");
}

}  // namespace

Design BuildDesignPool(const TrialTable &table,
                       const UtteranceTable &utterances,
                       const FeatureCatalog &catalog) {
  // Standardization population: the distinct complete utterances referenced
  // by this (possibly speaker-split) trial table.
  std::set<std::string> seen;
  std::vector<const UtteranceSummary *> population;
  std::set<std::string> incomplete;
  for (const auto &t : table.trials) {
    for (const std::string *id : {&t.enroll_id, &t.test_id}) {
      if (!seen.insert(*id).second) continue;
      const UtteranceSummary *u = utterances.find(*id);
      if (!u)
        throw ConfigError("trial references unknown utterance '" + *id + "'");
      if (u->complete)
        population.push_back(u);
      else
        incomplete.insert(*id);
    }
  }
  Standardizer std = FitStandardizer(population, catalog);

  Design design;
  int ncols = catalog.num_columns();
  int ngroups = static_cast<int>(catalog.groups().size());
  std::vector<int> rows_kept;
  for (size_t i = 0; i < table.trials.size(); ++i) {
    const auto &t = table.trials[i];
    if (incomplete.count(t.enroll_id) || incomplete.count(t.test_id)) {
      ++design.excluded_trials;
      continue;
    }
    rows_kept.push_back(static_cast<int>(i));
  }
  int n = static_cast<int>(rows_kept.size());
  design.response.resize(n);
  design.predictors.resize(n, ncols + ngroups);
  design.speaker_index.resize(n);
  design.trial_rows = rows_kept;

  std::map<std::string, int> speaker_lookup;
  std::vector<std::string> group_skips;
  for (int r = 0; r < n; ++r) {
    const auto &t = table.trials[rows_kept[r]];
    const UtteranceSummary *enroll = utterances.find(t.enroll_id);
    const UtteranceSummary *test = utterances.find(t.test_id);
    Eigen::VectorXd d = DistanceFeatures(*enroll, *test, std);
    design.predictors.block(r, 0, 1, ncols) = d.transpose();
    design.predictors.block(r, ncols, 1, ngroups) =
        GroupSum(d, catalog, std, r == 0 ? &group_skips : nullptr).transpose();
    design.response[r] = t.score;
    auto it = speaker_lookup.find(t.speaker_id);
    if (it == speaker_lookup.end()) {
      it = speaker_lookup
               .emplace(t.speaker_id,
                        static_cast<int>(design.speakers.size()))
               .first;
      design.speakers.push_back(t.speaker_id);
    }
    design.speaker_index[r] = it->second;
  }
  for (const auto &c : catalog.columns())
    design.predictor_names.push_back(ColumnLabel(c));
  for (const auto &g : catalog.groups())
    design.predictor_names.push_back(g.name);

  for (const auto &c : std.dropped_columns)
    design.notes.push_back("dropped zero-variance column " + c);
  for (const auto &s : group_skips)
    design.notes.push_back("group member skipped (dropped column): " + s);
  if (design.excluded_trials > 0)
    design.notes.push_back(
        std::to_string(design.excluded_trials) +
        " trial(s) excluded due to incomplete utterance data");
  return design;
}

Design SubsetDesign(const Design &pool,
                    const std::vector<std::string> &selection) {
  if (selection.empty()) throw ConfigError("empty predictor selection");
  Design out;
  out.response = pool.response;
  out.speaker_index = pool.speaker_index;
  out.speakers = pool.speakers;
  out.trial_rows = pool.trial_rows;
  out.excluded_trials = pool.excluded_trials;
  out.notes = pool.notes;
  out.predictors.resize(pool.rows(), selection.size());
  for (size_t j = 0; j < selection.size(); ++j) {
    int idx = -1;
    for (size_t k = 0; k < pool.predictor_names.size(); ++k)
      if (pool.predictor_names[k] == selection[j]) {
        idx = static_cast<int>(k);
        break;
      }
    if (idx < 0)
      throw ConfigError("unknown predictor '" + selection[j] + "'");
    out.predictors.col(j) = pool.predictors.col(idx);
    out.predictor_names.push_back(selection[j]);
  }
  CheckDesignShape(out.rows(), out.cols());
  return out;
}

Design BuildDesign(const TrialTable &table, const UtteranceTable &utterances,
                   const FeatureCatalog &catalog,
                   const std::vector<std::string> &selection) {
  if (selection.empty()) throw ConfigError("empty predictor selection");
  return SubsetDesign(BuildDesignPool(table, utterances, catalog), selection);
}

std::vector<std::string> AllGroupNames(const FeatureCatalog &catalog) {
  std::vector<std::string> names;
  for (const auto &g : catalog.groups()) names.push_back(g.name);
  return names;
}

void WriteDesignCsv(const std::string &path, const Design &design) {
  std::vector<std::string> header = {"trial_index", "speaker_id", "score"};
  for (const auto &n : design.predictor_names) header.push_back(n);
  std::vector<std::vector<std::string>> rows;
  rows.reserve(design.rows());
  for (int r = 0; r < design.rows(); ++r) {
    std::vector<std::string> row = {
        std::to_string(design.trial_rows.empty() ? r : design.trial_rows[r]),
        design.speakers[design.speaker_index[r]],
        FormatDouble(design.response[r])};
    for (int c = 0; c < design.cols(); ++c)
      row.push_back(FormatDouble(design.predictors(r, c)));
    rows.push_back(std::move(row));
  }
  WriteCsv(path, header, rows);
}

}  // namespace scorelens
