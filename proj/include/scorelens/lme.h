// scorelens/include/scorelens/lme.h
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Random-intercept linear mixed-effects model
//
//   y_ij = b0 + beta . x_ij + u_i + e_ij,   u_i ~ N(0, sigma_b^2),
//                                           e_ij ~ N(0, sigma^2),
//
// fitted by profiling the deviance down to the scalar variance ratio
// theta = sigma_b^2 / sigma^2.  For each speaker block the inverse
// correlation acts as W_i = I - (theta / (1 + n_i theta)) 11^T, which is
// applied through per-speaker column sums and never materialized.

#ifndef SCORELENS_LME_H_
#define SCORELENS_LME_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "scorelens/predictors.h"

namespace scorelens {

enum class Criterion { kML, kREML };

std::string CriterionName(Criterion c);
Criterion ParseCriterion(const std::string &name);

struct LmeOptions {
  Criterion criterion = Criterion::kML;
  double theta_max = 1e6;
  double tol = 1e-10;     // absolute tolerance on theta
  int max_iterations = 200;
};

struct ProfiledEval {
  double deviance = 0.0;        // -2 log-likelihood at the criterion
  Eigen::VectorXd beta;         // GLS coefficients at this theta
  double sigma2 = 0.0;          // profiled residual variance
};

struct LmeFit {
  std::vector<std::string> coef_names;  // "(Intercept)" first
  Eigen::VectorXd beta;
  Eigen::VectorXd se;
  Eigen::VectorXd t_values;
  Eigen::MatrixXd cov_beta;     // sigma2 * (X' W X)^-1
  double theta = 0.0;           // sigma_b^2 / sigma^2
  double sigma_b2 = 0.0;
  double sigma2 = 0.0;
  Criterion criterion = Criterion::kML;
  double loglik = 0.0;          // at the chosen criterion
  double loglik_ml = 0.0;       // always available, feeds AIC / LRT
  double aic = 0.0;             // 2k - 2 loglik_ml, k = p + 2
  Eigen::VectorXd fitted;       // X beta + blup, per row
  Eigen::VectorXd residuals;    // response - fitted, exactly
  std::vector<std::string> speakers;
  Eigen::VectorXd blups;        // per speaker, aligned with `speakers`
  bool converged = false;
  int iterations = 0;
  bool boundary = false;        // theta-hat hit 0 (no speaker effect)
  int n = 0;                    // rows
  int p = 0;                    // fixed-effect count incl. intercept
};

// Precomputes per-speaker cross-products from a design so that each
// profiled-deviance evaluation is O(G p^2).  Immutable once built.
class LmeProblem {
 public:
  // Throws StatError on collinear predictors (names the offending columns),
  // fewer than 2 speakers, or n <= p + 2.
  explicit LmeProblem(const Design &design);

  int rows() const { return n_; }
  int coefs() const { return p_; }

  ProfiledEval ProfiledDeviance(double theta, Criterion criterion) const;
  LmeFit Fit(const LmeOptions &options = {}) const;

 private:
  struct NormalEquations {
    Eigen::MatrixXd a;    // X' W X
    Eigen::VectorXd rhs;  // X' W y
    double ytwy = 0.0;
    double logdet_v0 = 0.0;  // sum log(1 + n_i theta)
  };
  NormalEquations Assemble(double theta) const;
  ProfiledEval EvalWithNe(const NormalEquations &ne, Criterion criterion) const;
  // d(deviance)/d(theta), via the envelope theorem on the profiled RSS.
  double DevianceDerivative(double theta, Criterion criterion) const;

  int n_ = 0, p_ = 0;
  Eigen::MatrixXd x_;   // n x p with intercept column
  Eigen::VectorXd y_;
  std::vector<int> group_of_row_;
  std::vector<std::string> speakers_;
  std::vector<long> group_sizes_;
  Eigen::MatrixXd group_x_sums_;  // G x p
  Eigen::VectorXd group_y_sums_;  // G
  Eigen::MatrixXd xtx_;
  Eigen::VectorXd xty_;
  double yty_ = 0.0;
  std::vector<std::string> coef_names_;
};

// Convenience wrappers matching the operation-level surface.
ProfiledEval ProfiledDeviance(double theta, const Design &design,
                              Criterion criterion);
LmeFit FitLme(const Design &design, const LmeOptions &options = {});

struct WaldResult {
  double f = 0.0;
  int df1 = 0;   // number of tested coefficients
  int df2 = 0;   // residual df, n - p
};

// Joint F-test of the selected coefficients (indices into coef_names).
WaldResult WaldTest(const LmeFit &fit, const std::vector<int> &coefficients);

struct LrtResult {
  double chi2 = 0.0;
  int df = 0;
  double p_value = 1.0;
};

// Likelihood-ratio test of nested ML fits on identical rows.
LrtResult LikelihoodRatioTest(const LmeFit &full, const LmeFit &reduced);

// 2k - 2 loglik_ml with k = p + 2 (fixed effects + both variance parameters).
double Aic(const LmeFit &fit);

std::string SerializeFit(const LmeFit &fit);     // JSON document
LmeFit DeserializeFit(const std::string &json_text);

}  // namespace scorelens

#endif  // SCORELENS_LME_H_
