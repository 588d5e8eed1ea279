// scorelens/include/scorelens/stats.h
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef SCORELENS_STATS_H_
#define SCORELENS_STATS_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace scorelens {

double SampleMean(std::span<const double> x);
// Sample standard deviation, denominator n-1.
double SampleSd(std::span<const double> x);
double Skewness(std::span<const double> x);
double ExcessKurtosis(std::span<const double> x);

// Product-moment correlation.  Throws StatError if either input is constant
// or lengths differ or n < 2.  This is the single shared implementation used
// by both ranking and diagnostics.
double Pearson(std::span<const double> a, std::span<const double> b);

// Standard normal CDF and its inverse.  The inverse uses Wichura's AS241
// rational approximations (absolute error well below 1e-8 over (0,1)).
double NormalCdf(double x);
double InverseNormalCdf(double p);

// Regularized incomplete gamma functions P(a,x) (lower) and Q(a,x) (upper),
// via series / continued-fraction evaluation.
double RegularizedGammaP(double a, double x);
double RegularizedGammaQ(double a, double x);

// Chi-square upper tail P(X > x) with df degrees of freedom.
double ChiSquareSf(double x, double df);

struct ScalarMinResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Brent-style scalar minimization (golden section with parabolic
// acceleration) on [a, b].  tol is the absolute x-tolerance.
ScalarMinResult MinimizeScalar(const std::function<double(double)> &f,
                               double a, double b, double tol, int max_iter);

}  // namespace scorelens

#endif  // SCORELENS_STATS_H_
