// scorelens/tests/test_ranking.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include <cmath>
#include <random>

#include <doctest.h>

#include "scorelens/error.h"
#include "scorelens/ranking.h"
#include "scorelens/stats.h"
#include "scorelens/synth.h"
#include "test_util.h"

using namespace scorelens;
using scorelens::testing::MakeDesign;

namespace {

// Synthesizes tables whose scores are driven by a chosen group, then builds
// the full candidate pool from them.
struct SynthPool {
  FeatureCatalog catalog = DefaultCatalog();
  SynthOutput out;
  Design pool;

  SynthPool(const std::vector<std::string> &groups,
            const Eigen::VectorXd &beta, std::uint64_t seed,
            int speakers = 60, int per_speaker = 25) {
    SynthSpec spec;
    spec.n_speakers = speakers;
    spec.trials_per_speaker = per_speaker;
    spec.predictor_selection = groups;
    spec.beta = beta;
    spec.sigma_b = 2.0;
    spec.sigma = 3.0;
    spec.seed = seed;
    out = Generate(spec, catalog);
    pool = BuildDesignPool(out.trials, out.utterances, catalog);
  }
};

}  // namespace

TEST_CASE("group candidates cover the catalog") {
  FeatureCatalog cat = DefaultCatalog();
  std::vector<Candidate> groups = GroupCandidates(cat);
  REQUIRE(groups.size() == 8);
  CHECK(groups[0].label == "F0");
  for (const auto &c : groups) CHECK(c.selection == std::vector<std::string>{c.label});

  std::vector<Candidate> vq = FeatureCandidates(cat, "VQ");
  CHECK(vq.size() == 12);
  for (const auto &c : vq) CHECK(c.selection.size() == 1);
  CHECK_THROWS_AS(FeatureCandidates(cat, "NoSuchGroup"), Error);
}

TEST_CASE("single-candidate ranking puts the driving group first") {
  Eigen::VectorXd beta(2);
  beta << 20.0, -3.0;
  SynthPool sp({"F0"}, beta, 2024);
  RankingResult res = RankSingle(sp.pool, GroupCandidates(sp.catalog));
  REQUIRE(res.entries.size() == 8);
  CHECK(res.entries[0].label == "F0");
  CHECK(res.entries[0].r > res.entries[1].r);
  for (size_t i = 1; i < res.entries.size(); ++i) {
    CHECK_FALSE(res.entries[i].failed);
    CHECK(res.entries[i - 1].r >= res.entries[i].r);  // sorted descending
  }
}

TEST_CASE("singleton candidate list is returned as-is") {
  Eigen::VectorXd beta(2);
  beta << 10.0, -1.0;
  SynthPool sp({"VQ"}, beta, 7, 30, 15);
  RankingResult res = RankSingle(sp.pool, {GroupCandidates(sp.catalog)[1]});
  REQUIRE(res.entries.size() == 1);
  CHECK(res.entries[0].label == "VQ");
  CHECK_FALSE(res.entries[0].failed);
  REQUIRE(res.entries[0].fit.has_value());
  CHECK(res.entries[0].fit->p == 2);
}

TEST_CASE("per-feature ranking over a 12-member group") {
  Eigen::VectorXd beta(2);
  beta << 15.0, -2.0;
  SynthPool sp({"VQ"}, beta, 99, 40, 20);
  RankingResult res = RankSingle(sp.pool, FeatureCandidates(sp.catalog, "VQ"));
  REQUIRE(res.entries.size() == 12);
  for (const auto &e : res.entries) CHECK_FALSE(e.failed);
  for (size_t i = 1; i < res.entries.size(); ++i)
    CHECK(res.entries[i - 1].r >= res.entries[i].r);
}

TEST_CASE("forward selection adds the driving groups first") {
  Eigen::VectorXd beta(3);
  beta << 20.0, -3.0, -1.5;
  SynthPool sp({"F0", "Temporal"}, beta, 31);
  RankingResult res = RankForward(sp.pool, GroupCandidates(sp.catalog));
  CHECK(res.mode == RankingMode::kForwardSelection);
  REQUIRE(res.entries.size() == 8);
  // The two truly predictive groups are selected in the first two steps.
  std::vector<std::string> first = {res.entries[0].label,
                                    res.entries[1].label};
  CHECK(((first[0] == "F0" && first[1] == "Temporal") ||
         (first[0] == "Temporal" && first[1] == "F0")));
  // In-sample r along a nested path never decreases.
  for (size_t i = 1; i < res.entries.size(); ++i)
    if (!res.entries[i].failed)
      CHECK(res.entries[i].r >= res.entries[i - 1].r - 1e-9);
}

TEST_CASE("forward selection gains are negligible under a null model") {
  SynthSpec spec;
  spec.n_speakers = 60;
  spec.trials_per_speaker = 25;
  spec.beta = Eigen::VectorXd::Constant(1, 12.0);
  spec.sigma_b = 2.0;
  spec.sigma = 3.0;
  spec.seed = 555;
  FeatureCatalog cat = DefaultCatalog();
  SynthOutput out = NullGenerate(spec, cat);
  Design pool = BuildDesignPool(out.trials, out.utterances, cat);
  RankingResult res = RankForward(pool, GroupCandidates(cat));
  for (size_t i = 1; i < res.entries.size(); ++i)
    if (!res.entries[i].failed && !res.entries[i - 1].failed)
      CHECK(res.entries[i].r - res.entries[i - 1].r < 0.02);
}

TEST_CASE("ranking r agrees with a direct pearson on the entry's fit") {
  Eigen::VectorXd beta(2);
  beta << 18.0, -2.5;
  SynthPool sp({"Formant1"}, beta, 12, 40, 20);
  RankingResult res = RankSingle(sp.pool, GroupCandidates(sp.catalog));
  for (const auto &e : res.entries) {
    REQUIRE(e.fit.has_value());
    std::vector<double> fitted(e.fit->fitted.begin(), e.fit->fitted.end());
    std::vector<double> scores(e.fit->fitted.size());
    for (int i = 0; i < e.fit->fitted.size(); ++i)
      scores[i] = e.fit->fitted[i] + e.fit->residuals[i];
    CHECK(e.r == doctest::Approx(Pearson(fitted, scores)).epsilon(1e-12));
  }
}

TEST_CASE("failed candidates sort last and carry their error") {
  // A tiny pool cannot support a 12-column candidate; the group columns fit.
  Eigen::VectorXd beta(2);
  beta << 10.0, -1.0;
  SynthPool sp({"F0"}, beta, 3, 4, 3);  // 12 trials only
  std::vector<Candidate> cands = GroupCandidates(sp.catalog);
  Candidate wide;
  wide.label = "VQ-members";
  for (const auto &m : sp.catalog.group("VQ").members)
    wide.selection.push_back(ColumnLabel(m));
  cands.push_back(wide);
  RankingResult res = RankSingle(sp.pool, cands);
  REQUIRE(res.entries.size() == 9);
  CHECK(res.entries.back().label == "VQ-members");
  CHECK(res.entries.back().failed);
  CHECK_FALSE(res.entries.back().error.empty());
}

TEST_CASE("final model report layout") {
  Eigen::VectorXd beta(3);
  beta << 25.0, -2.0, -0.8;
  SynthPool sp({"F0", "VQ"}, beta, 77);
  FinalModelReport report = BuildFinalModel(sp.pool, sp.catalog);
  REQUIRE(report.rows.size() == 9);  // intercept + 8 groups
  CHECK(report.rows[0].label == "(Intercept)");
  CHECK_FALSE(report.rows[0].r.has_value());
  for (size_t i = 2; i < report.rows.size(); ++i) {
    REQUIRE(report.rows[i].r.has_value());
    CHECK(*report.rows[i - 1].r >= *report.rows[i].r);
  }
  CHECK(report.fit.p == 9);
  CHECK(report.fit.converged);
  // The strongest single group is the one actually driving the scores.
  CHECK(report.rows[1].label == "F0");
}
