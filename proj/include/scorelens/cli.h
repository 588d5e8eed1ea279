// scorelens/include/scorelens/cli.h
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef SCORELENS_CLI_H_
#define SCORELENS_CLI_H_

#include <cstdint>
#include <string>

namespace scorelens {

struct RunConfig {
  std::string utterances_path;
  std::string trials_path;
  std::string catalog_path;   // empty -> default catalog
  std::string speakers_path;  // optional speaker-subset file
  std::string out_dir = ".";
  std::string criterion = "ml";   // ml | reml
  std::string mode = "single";    // single | forward
  std::string scope = "groups";   // groups | features:GROUP
  std::string fit_path;           // diag input
  std::string full_spec;          // anova: comma-separated predictor labels
  std::string reduced_spec;
  bool dump_design = false;
  bool no_svg = false;
  // synth settings
  std::uint64_t seed = 0;
  int n_speakers = 200;
  int trials_per_speaker = 50;
  std::string beta_spec = "28,-1.0,-0.35";
  std::string synth_predictors = "F0,VQ";
  double sigma_b = 4.5;
  double sigma = 9.0;
  bool null_model = false;
};

// Each command returns 0 on success and throws scorelens::Error otherwise
// (kConfig/kIo -> exit 2, kStat -> exit 1; main() does the mapping).
int CmdFit(const RunConfig &config);
int CmdRank(const RunConfig &config);
int CmdAnova(const RunConfig &config);
int CmdDiag(const RunConfig &config);
int CmdSynth(const RunConfig &config);

}  // namespace scorelens

#endif  // SCORELENS_CLI_H_
