// scorelens/tests/test_predictors.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include <random>

#include <doctest.h>

#include "scorelens/csv.h"
#include "scorelens/error.h"
#include "scorelens/predictors.h"
#include "scorelens/stats.h"
#include "test_util.h"

using namespace scorelens;
using scorelens::testing::TempDir;
using scorelens::testing::WriteFile;

namespace {

UtteranceSummary MakeUtt(const std::string &id, const std::string &spk,
                         std::vector<double> values) {
  UtteranceSummary u;
  u.utterance_id = id;
  u.speaker_id = spk;
  u.values = std::move(values);
  return u;
}

FeatureCatalog TwoFeatureCatalog() {
  return LoadCustomCatalog(R"({
    "features": [{"name": "F0"}, {"name": "HNR"}],
    "groups": [{"name": "all",
                "members": ["F0:mean", "F0:std", "HNR:mean", "HNR:std"]}]
  })");
}

// A small in-memory dataset: 3 speakers, several utterances each.
struct Fixture {
  FeatureCatalog catalog = TwoFeatureCatalog();
  UtteranceTable utts;
  TrialTable trials;

  Fixture() {
    std::mt19937 rng(42);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const char *speakers[] = {"a", "b", "c"};
    for (int s = 0; s < 3; ++s)
      for (int u = 0; u < 5; ++u) {
        std::string id = std::string(speakers[s]) + std::to_string(u);
        utts.index[id] = static_cast<int>(utts.rows.size());
        utts.rows.push_back(MakeUtt(
            id, speakers[s],
            {gauss(rng), gauss(rng), gauss(rng), gauss(rng)}));
      }
    std::normal_distribution<double> noise(0.0, 0.5);
    for (int s = 0; s < 3; ++s)
      for (int u = 0; u < 4; ++u) {
        TrialRecord t;
        t.speaker_id = speakers[s];
        t.enroll_id = std::string(speakers[s]) + std::to_string(u);
        t.test_id = std::string(speakers[s]) + std::to_string(u + 1);
        t.score = 10 + noise(rng);
        trials.trials.push_back(t);
      }
    trials.Rebuild();
  }
};

}  // namespace

TEST_CASE("standardizer moments on a fixed column") {
  FeatureCatalog cat = TwoFeatureCatalog();
  std::vector<UtteranceSummary> utts = {MakeUtt("u1", "a", {1, 1, 1, 4}),
                                        MakeUtt("u2", "a", {2, 2, 5, 5}),
                                        MakeUtt("u3", "b", {3, 3, 9, 6})};
  std::vector<const UtteranceSummary *> ptrs;
  for (const auto &u : utts) ptrs.push_back(&u);
  Standardizer std = FitStandardizer(ptrs, cat);
  CHECK(std.mean[0] == doctest::Approx(2.0));
  CHECK(std.sd[0] == doctest::Approx(1.0));  // sample sd of {1,2,3}
  CHECK(std.Standardize(0, 1.0) == doctest::Approx(-1.0));
  CHECK(std.Standardize(0, 2.0) == doctest::Approx(0.0));
  CHECK(std.Standardize(0, 3.0) == doctest::Approx(1.0));
  CHECK(std.dropped_columns.empty());
}

TEST_CASE("constant column is dropped with a report") {
  FeatureCatalog cat = TwoFeatureCatalog();
  std::vector<UtteranceSummary> utts = {MakeUtt("u1", "a", {5, 1, 1, 4}),
                                        MakeUtt("u2", "a", {5, 2, 5, 5}),
                                        MakeUtt("u3", "b", {5, 3, 9, 6})};
  std::vector<const UtteranceSummary *> ptrs;
  for (const auto &u : utts) ptrs.push_back(&u);
  Standardizer std = FitStandardizer(ptrs, cat);
  CHECK_FALSE(std.kept[0]);
  REQUIRE(std.dropped_columns.size() == 1);
  CHECK(std.dropped_columns[0] == "F0:mean");
  // Dropped column contributes zero distance.
  Eigen::VectorXd d = DistanceFeatures(utts[0], utts[1], std);
  CHECK(d[0] == 0.0);
  CHECK(d[1] > 0.0);
}

TEST_CASE("distance arithmetic") {
  FeatureCatalog cat = TwoFeatureCatalog();
  std::vector<UtteranceSummary> utts = {MakeUtt("u1", "a", {1, 1, 1, 1}),
                                        MakeUtt("u2", "a", {2, 2, 2, 2}),
                                        MakeUtt("u3", "b", {3, 3, 3, 3})};
  std::vector<const UtteranceSummary *> ptrs;
  for (const auto &u : utts) ptrs.push_back(&u);
  Standardizer std = FitStandardizer(ptrs, cat);
  // z-scores per column are {-1, 0, 1}.
  Eigen::VectorXd d = DistanceFeatures(utts[0], utts[2], std);
  for (int c = 0; c < 4; ++c) CHECK(d[c] == doctest::Approx(2.0));
  d = DistanceFeatures(utts[0], utts[1], std);
  for (int c = 0; c < 4; ++c) CHECK(d[c] == doctest::Approx(1.0));
  // Identical utterance values give an all-zero distance vector.
  UtteranceSummary copy = utts[1];
  copy.utterance_id = "u2b";
  d = DistanceFeatures(utts[1], copy, std);
  CHECK(d.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("distances are symmetric and affine-invariant") {
  Fixture f;
  Design pool = BuildDesignPool(f.trials, f.utts, f.catalog);
  // Symmetry: swap enroll/test in every trial.
  TrialTable swapped = f.trials;
  for (auto &t : swapped.trials) std::swap(t.enroll_id, t.test_id);
  Design pool_swapped = BuildDesignPool(swapped, f.utts, f.catalog);
  CHECK((pool.predictors - pool_swapped.predictors).cwiseAbs().maxCoeff() <
        1e-12);
  // Affine invariance: shift and scale raw column values.
  UtteranceTable shifted = f.utts;
  for (auto &u : shifted.rows)
    for (size_t c = 0; c < u.values.size(); ++c)
      u.values[c] = 3.7 * u.values[c] + 11.0;
  Design pool_shifted = BuildDesignPool(f.trials, shifted, f.catalog);
  CHECK((pool.predictors - pool_shifted.predictors).cwiseAbs().maxCoeff() <
        1e-10);
}

TEST_CASE("standardized population has mean 0 and sd 1 per column") {
  Fixture f;
  std::vector<const UtteranceSummary *> ptrs;
  for (const auto &u : f.utts.rows) ptrs.push_back(&u);
  Standardizer std = FitStandardizer(ptrs, f.catalog);
  for (int c = 0; c < f.catalog.num_columns(); ++c) {
    std::vector<double> z;
    for (const auto *u : ptrs) z.push_back(std.Standardize(c, u->values[c]));
    CHECK(std::fabs(SampleMean(z)) < 1e-10);
    CHECK(std::fabs(SampleSd(z) - 1.0) < 1e-10);
  }
}

TEST_CASE("group sum is linear and matches manual sums") {
  Fixture f;
  std::vector<const UtteranceSummary *> ptrs;
  for (const auto &u : f.utts.rows) ptrs.push_back(&u);
  Standardizer std = FitStandardizer(ptrs, f.catalog);
  Eigen::VectorXd d1 = DistanceFeatures(f.utts.rows[0], f.utts.rows[1], std);
  Eigen::VectorXd d2 = DistanceFeatures(f.utts.rows[2], f.utts.rows[3], std);
  Eigen::VectorXd g1 = GroupSum(d1, f.catalog, std);
  Eigen::VectorXd g2 = GroupSum(d2, f.catalog, std);
  Eigen::VectorXd gsum = GroupSum(d1 + d2, f.catalog, std);
  CHECK((gsum - g1 - g2).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(g1[0] == doctest::Approx(d1.sum()));
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(d1.size());
  CHECK(GroupSum(zero, f.catalog, std).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build design shapes and errors") {
  Fixture f;
  Design grouped = BuildDesign(f.trials, f.utts, f.catalog, {"all"});
  CHECK(grouped.rows() == 12);
  CHECK(grouped.cols() == 1);
  CHECK(grouped.speakers.size() == 3);
  CHECK(grouped.predictors.minCoeff() >= 0.0);

  Design single = BuildDesign(f.trials, f.utts, f.catalog, {"F0:mean"});
  CHECK(single.cols() == 1);

  CHECK_THROWS_WITH_AS(BuildDesign(f.trials, f.utts, f.catalog, {}),
                       doctest::Contains("empty predictor selection"), Error);
  CHECK_THROWS_AS(BuildDesign(f.trials, f.utts, f.catalog, {"nope"}), Error);

  // Too few rows for the predictor count.
  TrialTable three;
  three.trials = {f.trials.trials[0], f.trials.trials[4], f.trials.trials[8]};
  three.Rebuild();
  CHECK_THROWS_WITH_AS(
      BuildDesign(three, f.utts, f.catalog,
                  {"F0:mean", "F0:std", "HNR:mean", "HNR:std"}),
      doctest::Contains("insufficient rows"), Error);
}

TEST_CASE("incomplete utterances exclude their trials with a report") {
  Fixture f;
  f.utts.rows[1].complete = false;  // utterance a1 touches trials 0 and 1
  f.utts.rows[1].values[2] = std::numeric_limits<double>::quiet_NaN();
  Design pool = BuildDesignPool(f.trials, f.utts, f.catalog);
  CHECK(pool.excluded_trials == 2);
  CHECK(pool.rows() == 10);
  bool noted = false;
  for (const auto &n : pool.notes)
    if (n.find("excluded") != std::string::npos) noted = true;
  CHECK(noted);
}

TEST_CASE("design csv dump round-trips through the csv reader") {
  Fixture f;
  Design grouped = BuildDesign(f.trials, f.utts, f.catalog, {"all"});
  TempDir dir("design");
  WriteDesignCsv(dir.file("design.csv"), grouped);
  CsvTable csv = ReadCsv(dir.file("design.csv"));
  CHECK(csv.header == std::vector<std::string>{"trial_index", "speaker_id",
                                               "score", "all"});
  REQUIRE(csv.rows.size() == 12);
  CHECK(*ParseDouble(csv.rows[0][3]) ==
        doctest::Approx(grouped.predictors(0, 0)));
}
