// scorelens/src/synth.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "scorelens/synth.h"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "scorelens/error.h"
#include "scorelens/predictors.h"
#include "scorelens/stats.h"

namespace scorelens {

namespace {

enum Stream : std::uint64_t {
  kStreamUtterance = 1,
  kStreamSpeakerEffect = 2,
  kStreamResidual = 3,
};

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based draw keyed on (seed, stream, a, b, c).
double UniformDraw(std::uint64_t seed, std::uint64_t stream, std::uint64_t a,
                   std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = SplitMix64(seed);
  h = SplitMix64(h ^ stream);
  h = SplitMix64(h ^ a);
  h = SplitMix64(h ^ b);
  h = SplitMix64(h ^ c);
  // 53-bit mantissa, offset into the open interval (0,1).
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianDraw(std::uint64_t seed, std::uint64_t stream, std::uint64_t a,
                    std::uint64_t b, std::uint64_t c) {
  return InverseNormalCdf(UniformDraw(seed, stream, a, b, c));
}

std::string PadId(const char *prefix, int value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, value);
  return buf;
}

SynthOutput GenerateImpl(const SynthSpec &spec, const FeatureCatalog &catalog,
                         bool null_model) {
  if (spec.n_speakers < 2) throw ConfigError("synth needs at least 2 speakers");
  if (spec.trials_per_speaker < 1)
    throw ConfigError("synth needs at least 1 trial per speaker");
  if (spec.sigma < 0.0 || spec.sigma_b < 0.0)
    throw ConfigError("synth standard deviations must be nonnegative");
  size_t d = null_model ? 0 : spec.predictor_selection.size();
  if (spec.beta.size() != static_cast<long>(d) + 1)
    throw ConfigError("synth beta length must be 1 + number of predictors");

  int ncols = catalog.num_columns();
  SynthOutput out;

  for (int s = 0; s < spec.n_speakers; ++s) {
    std::string speaker = PadId("s", s, 4);
    for (int u = 0; u <= spec.trials_per_speaker; ++u) {
      UtteranceSummary utt;
      utt.speaker_id = speaker;
      utt.utterance_id = speaker + "_" + PadId("u", u, 5);
      utt.values.resize(ncols);
      for (int c = 0; c < ncols; ++c)
        utt.values[c] = spec.column_spread *
                        GaussianDraw(spec.seed, kStreamUtterance, s, u, c);
      out.utterances.index[utt.utterance_id] =
          static_cast<int>(out.utterances.rows.size());
      out.utterances.rows.push_back(std::move(utt));
    }
    for (int j = 0; j < spec.trials_per_speaker; ++j) {
      TrialRecord t;
      t.speaker_id = speaker;
      t.enroll_id = speaker + "_" + PadId("u", j, 5);
      t.test_id = speaker + "_" + PadId("u", j + 1, 5);
      out.trials.trials.push_back(std::move(t));
    }
  }
  out.trials.Rebuild();

  out.truth.sigma_b = spec.sigma_b;
  out.truth.sigma = spec.sigma;
  out.truth.beta = null_model ? spec.beta.head(1).eval() : spec.beta;
  if (!null_model) out.truth.predictor_labels = spec.predictor_selection;
  out.truth.speakers.reserve(spec.n_speakers);
  out.truth.speaker_effects.resize(spec.n_speakers);
  for (int s = 0; s < spec.n_speakers; ++s) {
    out.truth.speakers.push_back(PadId("s", s, 4));
    out.truth.speaker_effects[s] =
        spec.sigma_b * GaussianDraw(spec.seed, kStreamSpeakerEffect, s, 0, 0);
  }

  // Score through the same distance pipeline the analysis uses, so the
  // fitted model sees exactly the generating predictors.
  Eigen::MatrixXd x;
  if (!null_model) {
    Design design = BuildDesign(out.trials, out.utterances, catalog,
                                spec.predictor_selection);
    x = design.predictors;
  }
  int row = 0;
  for (int s = 0; s < spec.n_speakers; ++s) {
    for (int j = 0; j < spec.trials_per_speaker; ++j, ++row) {
      double y = out.truth.beta[0] + out.truth.speaker_effects[s] +
                 spec.sigma * GaussianDraw(spec.seed, kStreamResidual, s, j, 0);
      if (!null_model)
        y += x.row(row).dot(out.truth.beta.tail(x.cols()));
      out.trials.trials[row].score = y;
    }
  }
  return out;
}

}  // namespace

SynthOutput Generate(const SynthSpec &spec, const FeatureCatalog &catalog) {
  return GenerateImpl(spec, catalog, /*null_model=*/false);
}

SynthOutput NullGenerate(const SynthSpec &spec, const FeatureCatalog &catalog) {
  SynthSpec null_spec = spec;
  null_spec.predictor_selection.clear();
  if (null_spec.beta.size() == 0) {
    null_spec.beta.resize(1);
    null_spec.beta[0] = 0.0;
  } else {
    null_spec.beta = spec.beta.head(1).eval();
  }
  return GenerateImpl(null_spec, catalog, /*null_model=*/true);
}

std::vector<std::string> WriteSynth(const std::string &dir,
                                    const FeatureCatalog &catalog,
                                    const SynthOutput &out) {
  std::vector<std::string> written;
  std::string upath = dir + "/utterances.csv";
  WriteUtterances(upath, catalog, out.utterances);
  written.push_back(upath);
  std::string tpath = dir + "/trials.csv";
  WriteTrials(tpath, out.trials);
  written.push_back(tpath);

  nlohmann::json truth;
  truth["predictor_labels"] = out.truth.predictor_labels;
  truth["beta"] = std::vector<double>(
      out.truth.beta.data(), out.truth.beta.data() + out.truth.beta.size());
  truth["sigma_b"] = out.truth.sigma_b;
  truth["sigma"] = out.truth.sigma;
  nlohmann::json effects;
  for (size_t i = 0; i < out.truth.speakers.size(); ++i)
    effects[out.truth.speakers[i]] = out.truth.speaker_effects[i];
  truth["speaker_effects"] = effects;
  std::string jpath = dir + "/truth.json";
  std::ofstream jf(jpath);
  if (!jf) throw IoError("cannot write '" + jpath + "'");
  jf << truth.dump(2) << "\n";
  written.push_back(jpath);
  return written;
}

}  // namespace scorelens
