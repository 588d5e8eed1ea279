// scorelens/src/ranking.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "scorelens/ranking.h"

#include <algorithm>

#include "scorelens/error.h"
#include "scorelens/stats.h"

namespace scorelens {

namespace {

double FittedCorrelation(const LmeFit &fit, const Eigen::VectorXd &response) {
  return Pearson(std::span<const double>(fit.fitted.data(), fit.fitted.size()),
                 std::span<const double>(response.data(), response.size()));
}

}  // namespace

std::vector<Candidate> GroupCandidates(const FeatureCatalog &catalog) {
  std::vector<Candidate> out;
  for (const auto &g : catalog.groups()) out.push_back({g.name, {g.name}});
  return out;
}

std::vector<Candidate> FeatureCandidates(const FeatureCatalog &catalog,
                                         const std::string &group_name) {
  const FeatureGroup &g = catalog.group(group_name);
  std::vector<Candidate> out;
  for (const auto &m : g.members) {
    std::string label = ColumnLabel(m);
    out.push_back({label, {label}});
  }
  return out;
}

RankingResult RankSingle(const Design &pool,
                         const std::vector<Candidate> &candidates,
                         const LmeOptions &options) {
  if (candidates.empty()) throw ConfigError("no ranking candidates");
  RankingResult result;
  result.mode = RankingMode::kSingleCandidate;
  for (const auto &cand : candidates) {
    RankingEntry entry;
    entry.label = cand.label;
    try {
      Design d = SubsetDesign(pool, cand.selection);
      LmeFit fit = FitLme(d, options);
      entry.r = FittedCorrelation(fit, d.response);
      entry.fit = std::move(fit);
    } catch (const Error &e) {
      entry.failed = true;
      entry.error = e.what();
    }
    result.entries.push_back(std::move(entry));
  }
  // Stable sort keeps candidate (catalog) order on ties; failures sink.
  std::stable_sort(result.entries.begin(), result.entries.end(),
                   [](const RankingEntry &a, const RankingEntry &b) {
                     if (a.failed != b.failed) return !a.failed;
                     if (a.failed) return false;
                     return a.r > b.r;
                   });
  return result;
}

RankingResult RankForward(const Design &pool,
                          const std::vector<Candidate> &candidates,
                          const LmeOptions &options) {
  if (candidates.empty()) throw ConfigError("no ranking candidates");
  RankingResult result;
  result.mode = RankingMode::kForwardSelection;
  std::vector<std::string> selected;
  std::vector<bool> used(candidates.size(), false);
  std::vector<std::string> failed_this_pass(candidates.size());

  while (true) {
    int best = -1;
    double best_r = 0.0;
    LmeFit best_fit;
    bool any_left = false;
    for (size_t i = 0; i < candidates.size(); ++i) {
      if (used[i]) continue;
      any_left = true;
      std::vector<std::string> trial_selection = selected;
      trial_selection.insert(trial_selection.end(),
                             candidates[i].selection.begin(),
                             candidates[i].selection.end());
      try {
        Design d = SubsetDesign(pool, trial_selection);
        LmeFit fit = FitLme(d, options);
        double r = FittedCorrelation(fit, d.response);
        if (best < 0 || r > best_r) {
          best = static_cast<int>(i);
          best_r = r;
          best_fit = std::move(fit);
        }
        failed_this_pass[i].clear();
      } catch (const Error &e) {
        failed_this_pass[i] = e.what();
      }
    }
    if (!any_left) break;
    if (best < 0) {
      // Every remaining candidate failed (e.g. collinear with the selected
      // set); report them and stop.
      for (size_t i = 0; i < candidates.size(); ++i) {
        if (used[i]) continue;
        RankingEntry entry;
        entry.label = candidates[i].label;
        entry.failed = true;
        entry.error = failed_this_pass[i];
        result.entries.push_back(std::move(entry));
        used[i] = true;
      }
      break;
    }
    used[best] = true;
    selected.insert(selected.end(), candidates[best].selection.begin(),
                    candidates[best].selection.end());
    RankingEntry entry;
    entry.label = candidates[best].label;
    entry.r = best_r;
    entry.fit = std::move(best_fit);
    result.entries.push_back(std::move(entry));
  }
  return result;
}

FinalModelReport BuildFinalModel(const Design &pool,
                                 const FeatureCatalog &catalog,
                                 const LmeOptions &options) {
  std::vector<Candidate> candidates = GroupCandidates(catalog);
  RankingResult ranking = RankSingle(pool, candidates, options);

  Design grouped = SubsetDesign(pool, AllGroupNames(catalog));
  FinalModelReport report;
  report.fit = FitLme(grouped, options);

  auto coef_index = [&](const std::string &name) {
    for (size_t i = 0; i < report.fit.coef_names.size(); ++i)
      if (report.fit.coef_names[i] == name) return static_cast<int>(i);
    throw StatError("coefficient '" + name + "' missing from final model");
  };

  FinalModelRow intercept;
  intercept.label = "(Intercept)";
  intercept.estimate = report.fit.beta[0];
  intercept.se = report.fit.se[0];
  intercept.t = report.fit.t_values[0];
  report.rows.push_back(intercept);
  for (const auto &entry : ranking.entries) {
    if (entry.failed)
      throw StatError("group '" + entry.label +
                      "' failed in ranking: " + entry.error);
    int idx = coef_index(entry.label);
    FinalModelRow row;
    row.label = entry.label;
    row.estimate = report.fit.beta[idx];
    row.se = report.fit.se[idx];
    row.t = report.fit.t_values[idx];
    row.r = entry.r;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace scorelens
