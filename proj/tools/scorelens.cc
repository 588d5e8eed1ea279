// scorelens/tools/scorelens.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include <iostream>

#include <CLI11.hpp>

#include "scorelens/cli.h"
#include "scorelens/error.h"
#include "scorelens/report.h"

int main(int argc, char **argv) {
  using scorelens::RunConfig;
  CLI::App app{"Explains speaker-verification target-trial scores by "
               "regressing them on enrollment-vs-test acoustic mismatch "
               "distances with a per-speaker random-intercept mixed model"};
  app.set_version_flag("--version", scorelens::kToolVersion);
  app.require_subcommand(1);

  RunConfig config;
  auto add_data_flags = [&](CLI::App *cmd) {
    cmd->add_option("--utterances", config.utterances_path,
                    "utterance summary CSV");
    cmd->add_option("--trials", config.trials_path, "target-trial CSV");
    cmd->add_option("--catalog", config.catalog_path,
                    "feature catalog JSON (default: built-in catalog)");
    cmd->add_option("--speakers", config.speakers_path,
                    "speaker-subset file, one id per line");
    cmd->add_option("--criterion", config.criterion, "ml or reml")
        ->check(CLI::IsMember({"ml", "reml"}));
  };
  auto add_out = [&](CLI::App *cmd) {
    cmd->add_option("--out", config.out_dir, "output directory");
  };

  CLI::App *fit = app.add_subcommand("fit", "fit the all-groups model and "
                                            "write the ranked coefficient "
                                            "report");
  add_data_flags(fit);
  add_out(fit);
  fit->add_flag("--dump-design", config.dump_design,
                "also write design.csv for external cross-checking");

  CLI::App *rank = app.add_subcommand("rank", "rank feature groups or "
                                              "individual distances by "
                                              "fitted-vs-score correlation");
  add_data_flags(rank);
  add_out(rank);
  rank->add_option("--mode", config.mode, "single or forward")
      ->check(CLI::IsMember({"single", "forward"}));
  rank->add_option("--scope", config.scope, "groups or features:GROUP");

  CLI::App *anova = app.add_subcommand("anova", "likelihood-ratio comparison "
                                                "of two nested models");
  add_data_flags(anova);
  add_out(anova);
  anova->add_option("--full", config.full_spec,
                    "full-model predictors, comma-separated");
  anova->add_option("--reduced", config.reduced_spec,
                    "reduced-model predictors, comma-separated");

  CLI::App *diag = app.add_subcommand("diag", "model-checking data files "
                                              "from a saved fit");
  diag->add_option("--fit", config.fit_path, "fit.json from a previous run");
  add_out(diag);
  diag->add_flag("--no-svg", config.no_svg, "skip the scatter graphic");

  CLI::App *synth = app.add_subcommand("synth", "generate synthetic tables "
                                                "with known ground truth");
  synth->add_option("--catalog", config.catalog_path, "feature catalog JSON");
  add_out(synth);
  synth->add_option("--seed", config.seed, "generator seed");
  synth->add_option("--n-speakers", config.n_speakers, "speaker count");
  synth->add_option("--trials-per-speaker", config.trials_per_speaker,
                    "trials per speaker");
  synth->add_option("--beta", config.beta_spec,
                    "intercept and coefficients, comma-separated");
  synth->add_option("--predictors", config.synth_predictors,
                    "predictor labels the coefficients attach to");
  synth->add_option("--sigma-b", config.sigma_b, "speaker-effect sd");
  synth->add_option("--sigma", config.sigma, "residual sd");
  synth->add_flag("--null", config.null_model,
                  "scores independent of all distances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fit->parsed()) return scorelens::CmdFit(config);
    if (rank->parsed()) return scorelens::CmdRank(config);
    if (anova->parsed()) return scorelens::CmdAnova(config);
    if (diag->parsed()) return scorelens::CmdDiag(config);
    if (synth->parsed()) return scorelens::CmdSynth(config);
  } catch (const scorelens::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == scorelens::ErrorKind::kStat ? 1 : 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
