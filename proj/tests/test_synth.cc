// scorelens/tests/test_synth.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include <cmath>

#include <doctest.h>

#include "scorelens/error.h"
#include "scorelens/predictors.h"
#include "scorelens/stats.h"
#include "scorelens/synth.h"
#include "test_util.h"

using namespace scorelens;
using scorelens::testing::ReadFile;
using scorelens::testing::TempDir;

namespace {

SynthSpec SmallSpec(std::uint64_t seed = 1) {
  SynthSpec spec;
  spec.n_speakers = 12;
  spec.trials_per_speaker = 8;
  spec.predictor_selection = {"F0"};
  spec.beta = Eigen::VectorXd(2);
  spec.beta << 20.0, -2.0;
  spec.sigma_b = 2.0;
  spec.sigma = 3.0;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("generated tables have the promised shape") {
  FeatureCatalog cat = DefaultCatalog();
  SynthSpec spec = SmallSpec();
  SynthOutput out = Generate(spec, cat);
  CHECK(out.utterances.rows.size() ==
        static_cast<size_t>(spec.n_speakers * (spec.trials_per_speaker + 1)));
  CHECK(out.trials.trials.size() ==
        static_cast<size_t>(spec.n_speakers * spec.trials_per_speaker));
  CHECK(out.trials.speakers.size() == static_cast<size_t>(spec.n_speakers));
  for (const auto &u : out.utterances.rows) {
    CHECK(u.complete);
    CHECK(u.values.size() == static_cast<size_t>(cat.num_columns()));
  }
  // Chained pairing: each trial uses two distinct utterances of its speaker.
  for (const auto &t : out.trials.trials) {
    CHECK(t.enroll_id != t.test_id);
    CHECK(out.utterances.find(t.enroll_id)->speaker_id == t.speaker_id);
    CHECK(out.utterances.find(t.test_id)->speaker_id == t.speaker_id);
  }
  CHECK(out.truth.speakers.size() == static_cast<size_t>(spec.n_speakers));
  CHECK(out.truth.beta.size() == 2);
}

TEST_CASE("generation is bitwise deterministic in the seed") {
  FeatureCatalog cat = DefaultCatalog();
  SynthOutput a = Generate(SmallSpec(42), cat);
  SynthOutput b = Generate(SmallSpec(42), cat);
  REQUIRE(a.utterances.rows.size() == b.utterances.rows.size());
  for (size_t i = 0; i < a.utterances.rows.size(); ++i)
    CHECK(a.utterances.rows[i].values == b.utterances.rows[i].values);
  for (size_t i = 0; i < a.trials.trials.size(); ++i)
    CHECK(a.trials.trials[i].score == b.trials.trials[i].score);
  // A different seed changes the data.
  SynthOutput c = Generate(SmallSpec(43), cat);
  CHECK(a.trials.trials[0].score != c.trials.trials[0].score);
}

TEST_CASE("written files are byte-identical across runs") {
  FeatureCatalog cat = DefaultCatalog();
  TempDir d1("synth_a"), d2("synth_b");
  WriteSynth(d1.path(), cat, Generate(SmallSpec(7), cat));
  WriteSynth(d2.path(), cat, Generate(SmallSpec(7), cat));
  for (const char *name : {"utterances.csv", "trials.csv", "truth.json"}) {
    std::string a = ReadFile(d1.file(name));
    std::string b = ReadFile(d2.file(name));
    CHECK_FALSE(a.empty());
    CHECK(a == b);
  }
}

TEST_CASE("written tables pass ingest validation and rebuild the design") {
  FeatureCatalog cat = DefaultCatalog();
  SynthSpec spec = SmallSpec(11);
  SynthOutput out = Generate(spec, cat);
  TempDir dir("synth_rt");
  WriteSynth(dir.path(), cat, out);
  UtteranceTable utts = LoadUtterances(dir.file("utterances.csv"), cat);
  TrialTable trials = LoadTrials(dir.file("trials.csv"), utts);
  CHECK(trials.rejections.empty());
  CHECK(trials.trials.size() == out.trials.trials.size());
  Design a = BuildDesignPool(out.trials, out.utterances, cat);
  Design b = BuildDesignPool(trials, utts, cat);
  CHECK((a.predictors - b.predictors).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((a.response - b.response).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("scores follow the declared generative model exactly") {
  FeatureCatalog cat = DefaultCatalog();
  SynthSpec spec = SmallSpec(19);
  spec.sigma = 0.0;  // no residual noise: score is exactly linear + effect
  SynthOutput out = Generate(spec, cat);
  Design pool = BuildDesign(out.trials, out.utterances, cat,
                            spec.predictor_selection);
  for (int r = 0; r < pool.rows(); ++r) {
    const TrialRecord &t = out.trials.trials[pool.trial_rows[r]];
    int g = -1;
    for (size_t s = 0; s < out.truth.speakers.size(); ++s)
      if (out.truth.speakers[s] == t.speaker_id) g = static_cast<int>(s);
    REQUIRE(g >= 0);
    double expected = spec.beta[0] +
                      spec.beta[1] * pool.predictors(r, 0) +
                      out.truth.speaker_effects[g];
    CHECK(pool.response[r] == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("distance columns follow the folded-normal law") {
  // |Z1 - Z2| for independent standard normals has mean 2 / sqrt(pi).
  FeatureCatalog cat = DefaultCatalog();
  SynthSpec spec = SmallSpec(23);
  spec.n_speakers = 400;
  spec.trials_per_speaker = 25;
  SynthOutput out = Generate(spec, cat);
  Design pool = BuildDesignPool(out.trials, out.utterances, cat);
  int idx = -1;
  for (size_t c = 0; c < pool.predictor_names.size(); ++c)
    if (pool.predictor_names[c] == "F0:mean") idx = static_cast<int>(c);
  REQUIRE(idx >= 0);
  std::vector<double> dist(pool.predictors.col(idx).begin(),
                           pool.predictors.col(idx).end());
  CHECK(SampleMean(dist) ==
        doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(0.03));
  CHECK(SampleSd(dist) ==
        doctest::Approx(std::sqrt(2.0 - 4.0 / M_PI)).epsilon(0.05));
}

TEST_CASE("speaker effects have the declared spread at scale") {
  FeatureCatalog cat = DefaultCatalog();
  SynthSpec spec = SmallSpec(29);
  spec.n_speakers = 10000;
  spec.trials_per_speaker = 1;
  spec.sigma_b = 4.5;
  SynthOutput out = Generate(spec, cat);
  std::vector<double> effects(out.truth.speaker_effects.begin(),
                              out.truth.speaker_effects.end());
  CHECK(SampleMean(effects) == doctest::Approx(0.0).epsilon(0.15));
  CHECK(SampleSd(effects) == doctest::Approx(4.5).epsilon(0.05));
}

TEST_CASE("null generator produces scores independent of the distances") {
  FeatureCatalog cat = DefaultCatalog();
  SynthSpec spec = SmallSpec(31);
  spec.n_speakers = 100;
  spec.trials_per_speaker = 20;
  spec.predictor_selection.clear();
  spec.beta = Eigen::VectorXd::Constant(1, 12.0);
  SynthOutput out = NullGenerate(spec, cat);
  Design pool = BuildDesignPool(out.trials, out.utterances, cat);
  // Within-speaker centered scores should not correlate with any group column.
  std::vector<double> resid(pool.rows());
  std::vector<double> speaker_mean(pool.speakers.size(), 0.0);
  std::vector<int> speaker_count(pool.speakers.size(), 0);
  for (int r = 0; r < pool.rows(); ++r) {
    speaker_mean[pool.speaker_index[r]] += pool.response[r];
    ++speaker_count[pool.speaker_index[r]];
  }
  for (size_t s = 0; s < speaker_mean.size(); ++s)
    speaker_mean[s] /= speaker_count[s];
  for (int r = 0; r < pool.rows(); ++r)
    resid[r] = pool.response[r] - speaker_mean[pool.speaker_index[r]];
  for (const auto &group : AllGroupNames(cat)) {
    int idx = -1;
    for (size_t c = 0; c < pool.predictor_names.size(); ++c)
      if (pool.predictor_names[c] == group) idx = static_cast<int>(c);
    REQUIRE(idx >= 0);
    std::vector<double> col(pool.predictors.col(idx).begin(),
                            pool.predictors.col(idx).end());
    CHECK(std::fabs(Pearson(col, resid)) < 0.06);
  }
}

TEST_CASE("spec validation") {
  FeatureCatalog cat = DefaultCatalog();
  SynthSpec spec = SmallSpec();
  spec.beta = Eigen::VectorXd::Constant(1, 1.0);  // wrong length
  CHECK_THROWS_AS(Generate(spec, cat), Error);
  spec = SmallSpec();
  spec.n_speakers = 1;
  CHECK_THROWS_AS(Generate(spec, cat), Error);
  spec = SmallSpec();
  spec.predictor_selection = {"NoSuchGroup"};
  CHECK_THROWS_AS(Generate(spec, cat), Error);
  spec = SmallSpec();
  spec.sigma = -1.0;
  CHECK_THROWS_AS(Generate(spec, cat), Error);
}
