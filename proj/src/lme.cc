// scorelens/src/lme.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "scorelens/lme.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scorelens/error.h"
#include "scorelens/stats.h"

namespace scorelens {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
// Floor on the profiled residual variance so exact-fit data stays finite.
constexpr double kSigma2Floor = 1e-300;
}  // namespace

std::string CriterionName(Criterion c) {
  return c == Criterion::kML ? "ML" : "REML";
}

Criterion ParseCriterion(const std::string &name) {
  std::string lower;
  for (char ch : name) lower.push_back(static_cast<char>(std::tolower(ch)));
  if (lower == "ml") return Criterion::kML;
  if (lower == "reml") return Criterion::kREML;
  throw ConfigError("unknown criterion '" + name + "' (expected ml or reml)");
}

LmeProblem::LmeProblem(const Design &design) {
  n_ = design.rows();
  int d = design.cols();
  p_ = d + 1;
  if (design.speakers.size() < 2)
    throw StatError("design needs at least 2 speakers");
  if (n_ <= p_ + 2)
    throw StatError("too few rows (" + std::to_string(n_) + ") for " +
                    std::to_string(p_) + " fixed-effect coefficients");

  x_.resize(n_, p_);
  x_.col(0).setOnes();
  x_.rightCols(d) = design.predictors;
  y_ = design.response;
  group_of_row_ = design.speaker_index;
  speakers_ = design.speakers;
  coef_names_.push_back("(Intercept)");
  for (const auto &name : design.predictor_names) coef_names_.push_back(name);

  int g = static_cast<int>(speakers_.size());
  group_sizes_.assign(g, 0);
  group_x_sums_ = Eigen::MatrixXd::Zero(g, p_);
  group_y_sums_ = Eigen::VectorXd::Zero(g);
  for (int r = 0; r < n_; ++r) {
    int i = group_of_row_[r];
    group_sizes_[i] += 1;
    group_x_sums_.row(i) += x_.row(r);
    group_y_sums_[i] += y_[r];
  }
  xtx_ = x_.transpose() * x_;
  xty_ = x_.transpose() * y_;
  long double yty = 0.0L;
  for (int r = 0; r < n_; ++r) yty += y_[r] * y_[r];
  yty_ = static_cast<double>(yty);

  // Collinearity is a hard error so that ranked predictors stay
  // interpretable; name the offending columns via QR pivots.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x_);
  qr.setThreshold(1e-10);
  if (qr.rank() < p_) {
    const auto &perm = qr.colsPermutation().indices();
    std::ostringstream msg;
    msg << "collinear fixed-effect columns:";
    for (int k = qr.rank(); k < p_; ++k) msg << " " << coef_names_[perm[k]];
    throw StatError(msg.str());
  }
}

LmeProblem::NormalEquations LmeProblem::Assemble(double theta) const {
  NormalEquations ne;
  ne.a = xtx_;
  ne.rhs = xty_;
  ne.ytwy = yty_;
  ne.logdet_v0 = 0.0;
  int g = static_cast<int>(group_sizes_.size());
  for (int i = 0; i < g; ++i) {
    double ni = static_cast<double>(group_sizes_[i]);
    double c = theta / (1.0 + ni * theta);
    ne.a.noalias() -=
        c * (group_x_sums_.row(i).transpose() * group_x_sums_.row(i));
    ne.rhs.noalias() -= c * group_y_sums_[i] * group_x_sums_.row(i).transpose();
    ne.ytwy -= c * group_y_sums_[i] * group_y_sums_[i];
    ne.logdet_v0 += std::log1p(ni * theta);
  }
  return ne;
}

ProfiledEval LmeProblem::EvalWithNe(const NormalEquations &ne,
                                    Criterion criterion) const {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(ne.a);
  if (ldlt.info() != Eigen::Success)
    throw StatError("normal equations are singular");
  ProfiledEval ev;
  ev.beta = ldlt.solve(ne.rhs);
  double rss = ne.ytwy - ev.beta.dot(ne.rhs);
  rss = std::max(rss, 0.0);
  double n = static_cast<double>(n_);
  if (criterion == Criterion::kML) {
    ev.sigma2 = std::max(rss / n, kSigma2Floor);
    ev.deviance = n * std::log(kTwoPi * ev.sigma2) + ne.logdet_v0 + n;
  } else {
    double df = n - p_;
    ev.sigma2 = std::max(rss / df, kSigma2Floor);
    double logdet_a = 0.0;
    for (int i = 0; i < p_; ++i)
      logdet_a += std::log(ldlt.vectorD()[i]);
    ev.deviance =
        df * std::log(kTwoPi * ev.sigma2) + ne.logdet_v0 + logdet_a + df;
  }
  return ev;
}

double LmeProblem::DevianceDerivative(double theta,
                                      Criterion criterion) const {
  NormalEquations ne = Assemble(theta);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(ne.a);
  if (ldlt.info() != Eigen::Success)
    throw StatError("normal equations are singular");
  Eigen::VectorXd beta = ldlt.solve(ne.rhs);
  double rss = std::max(ne.ytwy - beta.dot(ne.rhs), kSigma2Floor);
  // Envelope theorem: only the explicit theta dependence of W survives,
  //   dRSS/dtheta = -sum_i (t_i - s_i' beta)^2 / (1 + n_i theta)^2.
  double drss = 0.0;
  double dlogdet_v0 = 0.0;
  double dlogdet_a = 0.0;
  int g = static_cast<int>(group_sizes_.size());
  for (int i = 0; i < g; ++i) {
    double ni = static_cast<double>(group_sizes_[i]);
    double denom = 1.0 + ni * theta;
    double resid_sum = group_y_sums_[i] - group_x_sums_.row(i).dot(beta);
    drss -= resid_sum * resid_sum / (denom * denom);
    dlogdet_v0 += ni / denom;
    if (criterion == Criterion::kREML) {
      Eigen::VectorXd si = group_x_sums_.row(i).transpose();
      dlogdet_a -= si.dot(ldlt.solve(si)) / (denom * denom);
    }
  }
  double df = criterion == Criterion::kML ? static_cast<double>(n_)
                                          : static_cast<double>(n_ - p_);
  return df * drss / rss + dlogdet_v0 + dlogdet_a;
}

ProfiledEval LmeProblem::ProfiledDeviance(double theta,
                                          Criterion criterion) const {
  if (theta < 0.0) throw StatError("theta must be nonnegative");
  return EvalWithNe(Assemble(theta), criterion);
}

LmeFit LmeProblem::Fit(const LmeOptions &options) const {
  auto objective = [&](double theta) {
    return EvalWithNe(Assemble(theta), options.criterion).deviance;
  };
  ScalarMinResult opt =
      MinimizeScalar(objective, 0.0, options.theta_max, options.tol,
                     options.max_iterations);
  // Function values localize the optimum only to ~sqrt(eps); polish to
  // machine precision with bisection on the analytic derivative.
  if (opt.x > 0.0) {
    double width = 1e-4 * (1.0 + opt.x);
    double lo = std::max(0.0, opt.x - width);
    double hi = std::min(options.theta_max, opt.x + width);
    double glo = DevianceDerivative(lo, options.criterion);
    double ghi = DevianceDerivative(hi, options.criterion);
    if (glo < 0.0 && ghi > 0.0) {
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + lo); ++it) {
        double mid = 0.5 * (lo + hi);
        if (DevianceDerivative(mid, options.criterion) < 0.0)
          lo = mid;
        else
          hi = mid;
      }
      double polished = 0.5 * (lo + hi);
      double fp = objective(polished);
      if (fp <= opt.fx + 1e-12 * (1.0 + std::fabs(opt.fx))) {
        opt.x = polished;
        opt.fx = fp;
      }
    }
  }
  // The minimizer never lands exactly on the boundary; theta = 0 (no speaker
  // effect) is a legal optimum and must be checked explicitly.  The small
  // relative slack makes analytically flat deviances (e.g. one trial per
  // speaker) resolve to the boundary instead of floating-point noise.
  double dev0 = objective(0.0);
  double theta_hat = opt.x;
  bool boundary = false;
  double slack = 1e-9 * (1.0 + std::fabs(dev0));
  if (dev0 <= opt.fx + slack || theta_hat < 1e-8) {
    if (dev0 <= opt.fx + slack) theta_hat = 0.0;
    boundary = true;
  }

  NormalEquations ne = Assemble(theta_hat);
  ProfiledEval ev = EvalWithNe(ne, options.criterion);

  LmeFit fit;
  fit.coef_names = coef_names_;
  fit.beta = ev.beta;
  fit.theta = theta_hat;
  fit.sigma2 = ev.sigma2;
  fit.sigma_b2 = theta_hat * ev.sigma2;
  fit.criterion = options.criterion;
  fit.loglik = -0.5 * ev.deviance;
  fit.converged = opt.converged;
  fit.iterations = opt.iterations;
  fit.boundary = boundary;
  fit.n = n_;
  fit.p = p_;
  fit.speakers = speakers_;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(ne.a);
  fit.cov_beta =
      ev.sigma2 * ldlt.solve(Eigen::MatrixXd::Identity(p_, p_));
  fit.se.resize(p_);
  fit.t_values.resize(p_);
  for (int j = 0; j < p_; ++j) {
    fit.se[j] = std::sqrt(std::max(fit.cov_beta(j, j), 0.0));
    fit.t_values[j] = fit.se[j] > 0.0 ? fit.beta[j] / fit.se[j] : 0.0;
  }

  int g = static_cast<int>(group_sizes_.size());
  fit.blups.resize(g);
  for (int i = 0; i < g; ++i) {
    double ni = static_cast<double>(group_sizes_[i]);
    double c = theta_hat / (1.0 + ni * theta_hat);
    fit.blups[i] = c * (group_y_sums_[i] - group_x_sums_.row(i).dot(fit.beta));
  }
  fit.fitted = x_ * fit.beta;
  for (int r = 0; r < n_; ++r) fit.fitted[r] += fit.blups[group_of_row_[r]];
  fit.residuals = y_ - fit.fitted;

  if (options.criterion == Criterion::kML) {
    fit.loglik_ml = fit.loglik;
  } else {
    ScalarMinResult mlopt = MinimizeScalar(
        [&](double theta) {
          return EvalWithNe(Assemble(theta), Criterion::kML).deviance;
        },
        0.0, options.theta_max, options.tol, options.max_iterations);
    double ml_dev = std::min(mlopt.fx,
                             EvalWithNe(Assemble(0.0), Criterion::kML).deviance);
    fit.loglik_ml = -0.5 * ml_dev;
  }
  fit.aic = 2.0 * (p_ + 2) - 2.0 * fit.loglik_ml;
  return fit;
}

ProfiledEval ProfiledDeviance(double theta, const Design &design,
                              Criterion criterion) {
  return LmeProblem(design).ProfiledDeviance(theta, criterion);
}

LmeFit FitLme(const Design &design, const LmeOptions &options) {
  return LmeProblem(design).Fit(options);
}

WaldResult WaldTest(const LmeFit &fit, const std::vector<int> &coefficients) {
  int q = static_cast<int>(coefficients.size());
  if (q < 1) throw StatError("Wald test needs at least one coefficient");
  std::set<int> unique(coefficients.begin(), coefficients.end());
  if (static_cast<int>(unique.size()) != q)
    throw StatError("Wald contrast is rank-deficient (repeated coefficient)");
  for (int c : coefficients)
    if (c < 0 || c >= fit.p)
      throw StatError("Wald test: coefficient index out of range");
  Eigen::VectorXd cb(q);
  Eigen::MatrixXd cvc(q, q);
  for (int i = 0; i < q; ++i) {
    cb[i] = fit.beta[coefficients[i]];
    for (int j = 0; j < q; ++j)
      cvc(i, j) = fit.cov_beta(coefficients[i], coefficients[j]);
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(cvc);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw StatError("Wald contrast covariance is rank-deficient");
  WaldResult res;
  res.f = cb.dot(ldlt.solve(cb)) / q;
  res.df1 = q;
  res.df2 = fit.n - fit.p;
  return res;
}

LrtResult LikelihoodRatioTest(const LmeFit &full, const LmeFit &reduced) {
  if (full.n != reduced.n)
    throw StatError("likelihood-ratio test: models fitted on differing rows");
  std::set<std::string> full_names(full.coef_names.begin(),
                                   full.coef_names.end());
  for (const auto &name : reduced.coef_names)
    if (!full_names.count(name))
      throw StatError("models are not nested: reduced model has predictor '" +
                      name + "' absent from the full model");
  if (reduced.p > full.p)
    throw StatError("models are not nested: reduced model is larger");
  LrtResult res;
  res.chi2 = std::max(0.0, 2.0 * (full.loglik_ml - reduced.loglik_ml));
  res.df = full.p - reduced.p;
  res.p_value = res.df == 0 ? 1.0 : ChiSquareSf(res.chi2, res.df);
  return res;
}

double Aic(const LmeFit &fit) {
  return 2.0 * (fit.p + 2) - 2.0 * fit.loglik_ml;
}

namespace {

nlohmann::json VectorToJson(const Eigen::VectorXd &v) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd VectorFromJson(const nlohmann::json &arr) {
  Eigen::VectorXd v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) v[i] = arr[i].get<double>();
  return v;
}

}  // namespace

std::string SerializeFit(const LmeFit &fit) {
  nlohmann::json j;
  j["coef_names"] = fit.coef_names;
  j["beta"] = VectorToJson(fit.beta);
  j["se"] = VectorToJson(fit.se);
  j["t_values"] = VectorToJson(fit.t_values);
  j["theta"] = fit.theta;
  j["sigma_b2"] = fit.sigma_b2;
  j["sigma2"] = fit.sigma2;
  j["criterion"] = CriterionName(fit.criterion);
  j["loglik"] = fit.loglik;
  j["loglik_ml"] = fit.loglik_ml;
  j["aic"] = fit.aic;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["boundary"] = fit.boundary;
  j["n"] = fit.n;
  j["p"] = fit.p;
  j["speakers"] = fit.speakers;
  j["blups"] = VectorToJson(fit.blups);
  j["fitted"] = VectorToJson(fit.fitted);
  j["residuals"] = VectorToJson(fit.residuals);
  nlohmann::json cov = nlohmann::json::array();
  for (int r = 0; r < fit.cov_beta.rows(); ++r)
    cov.push_back(VectorToJson(fit.cov_beta.row(r)));
  j["cov_beta"] = cov;
  return j.dump(2);
}

LmeFit DeserializeFit(const std::string &json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error &e) {
    throw IoError(std::string("fit document is not valid JSON: ") + e.what());
  }
  LmeFit fit;
  try {
    fit.coef_names = j.at("coef_names").get<std::vector<std::string>>();
    fit.beta = VectorFromJson(j.at("beta"));
    fit.se = VectorFromJson(j.at("se"));
    fit.t_values = VectorFromJson(j.at("t_values"));
    fit.theta = j.at("theta").get<double>();
    fit.sigma_b2 = j.at("sigma_b2").get<double>();
    fit.sigma2 = j.at("sigma2").get<double>();
    fit.criterion = ParseCriterion(j.at("criterion").get<std::string>());
    fit.loglik = j.at("loglik").get<double>();
    fit.loglik_ml = j.at("loglik_ml").get<double>();
    fit.aic = j.at("aic").get<double>();
    fit.converged = j.at("converged").get<bool>();
    fit.iterations = j.at("iterations").get<int>();
    fit.boundary = j.at("boundary").get<bool>();
    fit.n = j.at("n").get<int>();
    fit.p = j.at("p").get<int>();
    fit.speakers = j.at("speakers").get<std::vector<std::string>>();
    fit.blups = VectorFromJson(j.at("blups"));
    fit.fitted = VectorFromJson(j.at("fitted"));
    fit.residuals = VectorFromJson(j.at("residuals"));
    const auto &cov = j.at("cov_beta");
    fit.cov_beta.resize(cov.size(), cov.size());
    for (size_t r = 0; r < cov.size(); ++r)
      fit.cov_beta.row(r) = VectorFromJson(cov[r]);
  } catch (const nlohmann::json::exception &e) {
    throw IoError(std::string("fit document missing fields: ") + e.what());
  }
  return fit;
}

}  // namespace scorelens
