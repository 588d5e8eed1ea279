// scorelens/include/scorelens/diagnostics.h
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef SCORELENS_DIAGNOSTICS_H_
#define SCORELENS_DIAGNOSTICS_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scorelens/lme.h"

namespace scorelens {

struct QqPoint {
  double theoretical;  // standard-normal quantile at (i - 0.5) / n
  double empirical;    // ordered standardized residual
};

// Normality inspection data: residuals standardized and sorted against
// normal quantiles.  Needs n >= 3 and nonconstant residuals.
std::vector<QqPoint> QqData(std::span<const double> residuals);

struct Histogram {
  std::vector<double> edges;  // counts.size() + 1 entries
  std::vector<int> counts;
};

// Freedman-Diaconis bin width, capped at 200 bins.
Histogram ResidualHistogram(std::span<const double> residuals);

struct ScatterResult {
  std::vector<std::pair<double, double>> points;  // (fitted, score)
  double r = 0.0;
};

ScatterResult ScatterAndR(const LmeFit &fit);

struct ResidualSummary {
  double residual_sd = 0.0;
  double speaker_sd = 0.0;  // sqrt(sigma_b2)
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double min = 0.0;
  double max = 0.0;
};

ResidualSummary SummarizeResiduals(const LmeFit &fit);

struct DiagnosticBundle {
  std::vector<QqPoint> qq_points;
  std::vector<std::pair<double, double>> residual_vs_fitted;
  Histogram histogram;
  ScatterResult scatter;
  ResidualSummary summary;
};

DiagnosticBundle BuildDiagnostics(const LmeFit &fit);

// Writes qq.csv, resid_fitted.csv, scatter.csv, hist.csv and scatter.svg
// into `dir`; returns the written paths.
std::vector<std::string> WriteDiagnostics(const std::string &dir,
                                          const DiagnosticBundle &bundle,
                                          bool with_svg = true);

}  // namespace scorelens

#endif  // SCORELENS_DIAGNOSTICS_H_
