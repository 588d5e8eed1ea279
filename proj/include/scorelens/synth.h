// scorelens/include/scorelens/synth.h
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef SCORELENS_SYNTH_H_
#define SCORELENS_SYNTH_H_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "scorelens/catalog.h"
#include "scorelens/ingest.h"

namespace scorelens {

// Ground-truth generator under the same generative model the fitter assumes.
// Draws are keyed on (seed, stream, entity indices) through a counter-based
// mixer, so output is bitwise deterministic and independent of evaluation
// order.
struct SynthSpec {
  int n_speakers = 200;
  int trials_per_speaker = 50;
  // Predictors the coefficients attach to: group names or column labels.
  // Empty selection means an intercept-only (null) score model.
  std::vector<std::string> predictor_selection;
  Eigen::VectorXd beta;  // intercept first; size = 1 + selection size
  double sigma_b = 4.5;
  double sigma = 9.0;
  double column_spread = 1.0;  // per-column sd of raw utterance summaries
  std::uint64_t seed = 0;
};

struct SynthTruth {
  std::vector<std::string> predictor_labels;
  Eigen::VectorXd beta;
  double sigma_b = 0.0;
  double sigma = 0.0;
  std::vector<std::string> speakers;
  Eigen::VectorXd speaker_effects;
};

struct SynthOutput {
  UtteranceTable utterances;
  TrialTable trials;
  SynthTruth truth;
};

// Per speaker: trials_per_speaker + 1 utterances chained into trials
// (trial j compares utterance j with j+1).  Scores are
// beta0 + beta . x + b_i + eps with x computed exactly as the predictors
// module computes it on the emitted tables.
SynthOutput Generate(const SynthSpec &spec, const FeatureCatalog &catalog);

// Same utterances and trial structure, but scores independent of every
// distance (intercept + speaker effect + noise only).
SynthOutput NullGenerate(const SynthSpec &spec, const FeatureCatalog &catalog);

// Emits utterances.csv, trials.csv and truth.json into `dir`.
std::vector<std::string> WriteSynth(const std::string &dir,
                                    const FeatureCatalog &catalog,
                                    const SynthOutput &out);

}  // namespace scorelens

#endif  // SCORELENS_SYNTH_H_
