// scorelens/tests/test_stats.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "scorelens/error.h"
#include "scorelens/stats.h"

using namespace scorelens;

TEST_CASE("pearson on fixed vectors") {
  std::vector<double> a = {1, 2, 3};
  CHECK(Pearson(a, a) == doctest::Approx(1.0));
  std::vector<double> b = {-1, -2, -3};
  CHECK(Pearson(a, b) == doctest::Approx(-1.0));
  // Hand-evaluated product-moment value, confirmed by brute force below.
  std::vector<double> c = {1, 2, 3, 4};
  std::vector<double> d = {2, 1, 4, 3};
  CHECK(Pearson(c, d) == doctest::Approx(0.6).epsilon(1e-12));
  double num = 0, da = 0, db = 0;
  for (int i = 0; i < 4; ++i) {
    num += (c[i] - 2.5) * (d[i] - 2.5);
    da += (c[i] - 2.5) * (c[i] - 2.5);
    db += (d[i] - 2.5) * (d[i] - 2.5);
  }
  CHECK(Pearson(c, d) == doctest::Approx(num / std::sqrt(da * db)));
}

TEST_CASE("pearson rejects degenerate input") {
  std::vector<double> a = {1, 2, 3};
  std::vector<double> constant = {5, 5, 5};
  CHECK_THROWS_AS((void)Pearson(a, constant), Error);
  std::vector<double> shorter = {1, 2};
  CHECK_THROWS_AS((void)Pearson(a, shorter), Error);
  std::vector<double> one = {1};
  CHECK_THROWS_AS((void)Pearson(one, one), Error);
}

TEST_CASE("inverse normal cdf against an independent root finder") {
  // Root-find Phi(x) = p on an independent erfc-based CDF evaluation.
  auto invert = [](double p) {
    double lo = -10, hi = 10;
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      if (NormalCdf(mid) < p) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  CHECK(InverseNormalCdf(0.975) == doctest::Approx(1.959964).epsilon(1e-6));
  // The reference inversion loses relative precision in the extreme upper
  // tail (cdf saturates near 1), hence the looser epsilon there.
  for (double p : {1e-8, 1e-4, 0.025, 0.31830989, 0.5, 0.77, 0.999})
    CHECK(InverseNormalCdf(p) == doctest::Approx(invert(p)).epsilon(1e-9));
  CHECK(InverseNormalCdf(1 - 1e-9) ==
        doctest::Approx(invert(1 - 1e-9)).epsilon(1e-7));
  CHECK_THROWS_AS((void)InverseNormalCdf(0.0), Error);
  CHECK_THROWS_AS((void)InverseNormalCdf(1.0), Error);
}

TEST_CASE("inverse normal cdf round-trips through the cdf") {
  for (int i = 1; i < 1000; ++i) {
    double p = i / 1000.0;
    CHECK(NormalCdf(InverseNormalCdf(p)) == doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("chi-square upper tail") {
  // df = 1 has the closed form 2 (1 - Phi(sqrt(x))).
  for (double x : {0.5, 1.0, 4.0, 9.0}) {
    double closed = 2.0 * (1.0 - NormalCdf(std::sqrt(x)));
    CHECK(ChiSquareSf(x, 1) == doctest::Approx(closed).epsilon(1e-10));
  }
  CHECK(ChiSquareSf(4.0, 1) == doctest::Approx(0.0455).epsilon(1e-3));
  // df = 2 is exponential: exp(-x/2).
  for (double x : {0.1, 1.0, 5.0, 20.0})
    CHECK(ChiSquareSf(x, 2) == doctest::Approx(std::exp(-x / 2)).epsilon(1e-12));
  CHECK(ChiSquareSf(0.0, 3) == doctest::Approx(1.0));
}

TEST_CASE("regularized gamma is a complementary pair") {
  for (double a : {0.5, 1.0, 2.5, 10.0})
    for (double x : {0.1, 0.9, 2.0, 15.0})
      CHECK(RegularizedGammaP(a, x) + RegularizedGammaQ(a, x) ==
            doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scalar minimizer finds quadratic and quartic minima") {
  auto quad = [](double x) { return (x - 3.25) * (x - 3.25) + 1.0; };
  ScalarMinResult res = MinimizeScalar(quad, 0.0, 1e6, 1e-10, 200);
  CHECK(res.converged);
  CHECK(res.x == doctest::Approx(3.25).epsilon(1e-7));
  auto quart = [](double x) { return std::pow(x - 0.017, 4); };
  res = MinimizeScalar(quart, 0.0, 100.0, 1e-10, 200);
  CHECK(res.converged);
  CHECK(res.x == doctest::Approx(0.017).epsilon(1e-2));
}

TEST_CASE("moment helpers") {
  std::vector<double> x = {1, 2, 3};
  CHECK(SampleMean(x) == doctest::Approx(2.0));
  CHECK(SampleSd(x) == doctest::Approx(1.0));
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss(0.0, 2.0);
  std::vector<double> z(20000);
  for (auto &v : z) v = gauss(rng);
  CHECK(SampleSd(z) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::fabs(Skewness(z)) < 0.1);
  CHECK(std::fabs(ExcessKurtosis(z)) < 0.2);
}
