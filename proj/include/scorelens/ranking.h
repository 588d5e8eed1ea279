// scorelens/include/scorelens/ranking.h
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef SCORELENS_RANKING_H_
#define SCORELENS_RANKING_H_

#include <optional>
#include <string>
#include <vector>

#include "scorelens/lme.h"
#include "scorelens/predictors.h"

namespace scorelens {

// A candidate predictor set: one group column, one individual distance
// column, or any explicit set of pool columns under a single label.
struct Candidate {
  std::string label;
  std::vector<std::string> selection;
};

enum class RankingMode { kSingleCandidate, kForwardSelection };

struct RankingEntry {
  std::string label;
  double r = 0.0;          // Pearson(fitted, scores)
  bool failed = false;
  std::string error;
  // Coefficient summary for the candidate's own predictors (single mode) or
  // the model state after this step (forward mode).
  std::optional<LmeFit> fit;
};

struct RankingResult {
  RankingMode mode = RankingMode::kSingleCandidate;
  std::vector<RankingEntry> entries;  // sorted by r desc (single mode) or in
                                      // inclusion order (forward mode)
};

// Candidate builders for the standard scopes.
std::vector<Candidate> GroupCandidates(const FeatureCatalog &catalog);
// Each member column of `group_name` as its own candidate.
std::vector<Candidate> FeatureCandidates(const FeatureCatalog &catalog,
                                         const std::string &group_name);

// Fit one model per candidate (candidate predictors + speaker intercepts),
// rank by fitted-vs-score correlation, descending.  Ties keep candidate
// (catalog) order; failed candidates sort last and carry their error.
RankingResult RankSingle(const Design &pool,
                         const std::vector<Candidate> &candidates,
                         const LmeOptions &options = {});

// Greedy forward selection: repeatedly add the candidate whose inclusion
// maximizes the refitted model's r, recording r along the path.
RankingResult RankForward(const Design &pool,
                          const std::vector<Candidate> &candidates,
                          const LmeOptions &options = {});

struct FinalModelRow {
  std::string label;       // "(Intercept)" or a group name
  double estimate = 0.0;
  double se = 0.0;
  double t = 0.0;
  std::optional<double> r;  // from single-candidate ranking; intercept has none
};

struct FinalModelReport {
  LmeFit fit;                       // all-groups model
  std::vector<FinalModelRow> rows;  // intercept first, then groups by r desc
};

FinalModelReport BuildFinalModel(const Design &pool,
                                 const FeatureCatalog &catalog,
                                 const LmeOptions &options = {});

}  // namespace scorelens

#endif  // SCORELENS_RANKING_H_
