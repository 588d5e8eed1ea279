// scorelens/include/scorelens/predictors.h
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef SCORELENS_PREDICTORS_H_
#define SCORELENS_PREDICTORS_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "scorelens/catalog.h"
#include "scorelens/ingest.h"

namespace scorelens {

// Per-column location/scale computed over the distinct utterances that appear
// in the analyzed trial table.  Zero-variance columns are dropped and
// reported; each utterance counts once no matter how many trials reuse it.
struct Standardizer {
  std::vector<double> mean;     // per catalog column
  std::vector<double> sd;      // sample sd (n-1); 0 marks a dropped column
  std::vector<bool> kept;
  std::vector<std::string> dropped_columns;  // labels, catalog order

  double Standardize(int column, double value) const {
    return (value - mean[column]) / sd[column];
  }
};

Standardizer FitStandardizer(const std::vector<const UtteranceSummary *> &utts,
                             const FeatureCatalog &catalog);

// Per-column |z_enroll - z_test| over the catalog columns; dropped columns
// yield 0 and are never selected downstream.
Eigen::VectorXd DistanceFeatures(const UtteranceSummary &enroll,
                                 const UtteranceSummary &test,
                                 const Standardizer &std);

// Sum of member distances per group, in scheme order.  Members referencing
// dropped columns are skipped; the skip list is returned through *skipped
// when non-null.
Eigen::VectorXd GroupSum(const Eigen::VectorXd &distances,
                         const FeatureCatalog &catalog,
                         const Standardizer &std,
                         std::vector<std::string> *skipped = nullptr);

// The regression design: response vector, nonnegative distance predictors
// (intercept implicit), and the per-row speaker grouping.
struct Design {
  Eigen::VectorXd response;
  Eigen::MatrixXd predictors;  // n x D
  std::vector<std::string> predictor_names;
  std::vector<int> speaker_index;       // n entries, 0..G-1
  std::vector<std::string> speakers;    // G labels
  std::vector<int> trial_rows;          // design row -> trial index
  int excluded_trials = 0;              // trials dropped for incomplete data
  std::vector<std::string> notes;       // dropped/skipped column reports

  int rows() const { return static_cast<int>(response.size()); }
  int cols() const { return static_cast<int>(predictors.cols()); }
};

// Selection entries are either group names ("VQ") or individual column
// labels ("F0:mean").  Group columns are group-summed distances.
Design BuildDesign(const TrialTable &table, const UtteranceTable &utterances,
                   const FeatureCatalog &catalog,
                   const std::vector<std::string> &selection);

// All 46 individual columns plus all group columns in one design, for
// cheap column subsetting during ranking.
Design BuildDesignPool(const TrialTable &table,
                       const UtteranceTable &utterances,
                       const FeatureCatalog &catalog);

Design SubsetDesign(const Design &pool,
                    const std::vector<std::string> &selection);

std::vector<std::string> AllGroupNames(const FeatureCatalog &catalog);

// `design.csv` dump for external cross-checking.
void WriteDesignCsv(const std::string &path, const Design &design);

}  // namespace scorelens

#endif  // SCORELENS_PREDICTORS_H_
