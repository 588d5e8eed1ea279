// scorelens/src/cli.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "scorelens/cli.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "scorelens/catalog.h"
#include "scorelens/csv.h"
#include "scorelens/diagnostics.h"
#include "scorelens/error.h"
#include "scorelens/ingest.h"
#include "scorelens/lme.h"
#include "scorelens/predictors.h"
#include "scorelens/ranking.h"
#include "scorelens/report.h"
#include "scorelens/synth.h"

namespace scorelens {

namespace {

namespace fs = std::filesystem;

FeatureCatalog LoadCatalogOrDefault(const RunConfig &config) {
  if (config.catalog_path.empty()) return DefaultCatalog();
  return LoadCatalogFile(config.catalog_path);
}

struct LoadedData {
  FeatureCatalog catalog;
  UtteranceTable utterances;
  TrialTable trials;
  std::vector<std::string> inputs;
};

LoadedData LoadInputs(const RunConfig &config) {
  if (config.utterances_path.empty())
    throw ConfigError("--utterances is required");
  if (config.trials_path.empty()) throw ConfigError("--trials is required");
  LoadedData data{LoadCatalogOrDefault(config), {}, {}, {}};
  data.utterances =
      LoadUtterances(config.utterances_path, data.catalog);
  data.trials = LoadTrials(config.trials_path, data.utterances);
  data.inputs = {config.utterances_path, config.trials_path};
  if (!config.catalog_path.empty()) data.inputs.push_back(config.catalog_path);
  if (!config.speakers_path.empty()) {
    data.trials = SplitBySpeakerSet(data.trials,
                                    LoadSpeakerList(config.speakers_path));
    data.inputs.push_back(config.speakers_path);
  }
  for (const auto &rej : data.trials.rejections)
    std::cerr << "rejected trial row " << rej.row << ": " << rej.reason
              << "\n";
  return data;
}

void EnsureOutDir(const std::string &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "'");
}

void WriteText(const std::string &path, const std::string &text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
}

std::vector<std::string> SplitCommaList(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::map<std::string, std::string> CommonConfig(const RunConfig &config) {
  std::map<std::string, std::string> m;
  if (!config.utterances_path.empty()) m["utterances"] = config.utterances_path;
  if (!config.trials_path.empty()) m["trials"] = config.trials_path;
  if (!config.catalog_path.empty()) m["catalog"] = config.catalog_path;
  if (!config.speakers_path.empty()) m["speakers"] = config.speakers_path;
  m["criterion"] = config.criterion;
  return m;
}

std::string RandomEffectsBlock(const LmeFit &fit) {
  TextTable table;
  table.header = {"", "Variance", "Std.dev."};
  table.rows.push_back({"Speaker", FormatFixed(fit.sigma_b2, 2),
                        FormatFixed(std::sqrt(std::max(fit.sigma_b2, 0.0)), 2)});
  table.rows.push_back({"Residual", FormatFixed(fit.sigma2, 2),
                        FormatFixed(std::sqrt(fit.sigma2), 2)});
  return table.RenderText();
}

}  // namespace

int CmdFit(const RunConfig &config) {
  LoadedData data = LoadInputs(config);
  LmeOptions options;
  options.criterion = ParseCriterion(config.criterion);

  Design pool = BuildDesignPool(data.trials, data.utterances, data.catalog);
  FinalModelReport report = BuildFinalModel(pool, data.catalog, options);
  if (!report.fit.converged)
    throw StatError("model fit did not converge within the iteration limit");

  TextTable fixed;
  fixed.header = {"", "Estimate", "Std. error", "t-value", "r"};
  TextTable machine;
  machine.header = {"rank", "label", "r", "estimate", "se", "t"};
  int rank = 0;
  for (const auto &row : report.rows) {
    fixed.rows.push_back({row.label, FormatFixed(row.estimate, 2),
                          FormatFixed(row.se, 3), FormatFixed(row.t, 2),
                          row.r ? FormatFixed(*row.r, 2) : ""});
    machine.rows.push_back(
        {row.r ? std::to_string(++rank) : "0", row.label,
         row.r ? FormatDouble(*row.r) : "", FormatDouble(row.estimate),
         FormatDouble(row.se), FormatDouble(row.t)});
  }

  std::ostringstream text;
  text << "Linear mixed effects model (" << CriterionName(options.criterion)
       << ")\n";
  text << "Trials: " << report.fit.n
       << "  Speakers: " << report.fit.speakers.size() << "\n";
  if (pool.excluded_trials > 0)
    text << "Excluded trials (incomplete utterances): "
         << pool.excluded_trials << "\n";
  for (const auto &note : pool.notes) text << "Note: " << note << "\n";
  text << "\nFixed effects:\n" << fixed.RenderText();
  text << "\nRandom effects:\n" << RandomEffectsBlock(report.fit);
  text << "\nLog-likelihood (" << CriterionName(options.criterion)
       << "): " << FormatFixed(report.fit.loglik, 2)
       << "  AIC: " << FormatFixed(report.fit.aic, 2) << "\n";
  text << "Wald denominator df: " << report.fit.n - report.fit.p
       << " (residual df)\n";
  if (report.fit.boundary)
    text << "Note: speaker variance hit the boundary (sigma_b^2 = 0); no "
            "boundary-corrected p-values are applied\n";

  EnsureOutDir(config.out_dir);
  std::vector<std::string> outputs;
  std::string report_txt = config.out_dir + "/fit_report.txt";
  WriteText(report_txt, text.str());
  outputs.push_back(report_txt);
  std::string report_csv = config.out_dir + "/fit_report.csv";
  WriteText(report_csv, machine.RenderCsv());
  outputs.push_back(report_csv);
  std::string fit_json = config.out_dir + "/fit.json";
  WriteText(fit_json, SerializeFit(report.fit));
  outputs.push_back(fit_json);
  if (config.dump_design) {
    std::string design_csv = config.out_dir + "/design.csv";
    Design grouped = SubsetDesign(pool, AllGroupNames(data.catalog));
    WriteDesignCsv(design_csv, grouped);
    outputs.push_back(design_csv);
  }
  WriteManifest(config.out_dir, "fit", CommonConfig(config), data.inputs,
                outputs);
  std::cout << text.str();
  return 0;
}

int CmdRank(const RunConfig &config) {
  LoadedData data = LoadInputs(config);
  LmeOptions options;
  options.criterion = ParseCriterion(config.criterion);

  bool per_feature = config.scope.rfind("features:", 0) == 0;
  std::vector<Candidate> candidates;
  if (config.scope == "groups") {
    candidates = GroupCandidates(data.catalog);
  } else if (per_feature) {
    candidates = FeatureCandidates(data.catalog, config.scope.substr(9));
  } else {
    throw ConfigError("unknown scope '" + config.scope +
                      "' (expected groups or features:GROUP)");
  }

  Design pool = BuildDesignPool(data.trials, data.utterances, data.catalog);
  RankingResult result;
  if (config.mode == "single") {
    result = RankSingle(pool, candidates, options);
  } else if (config.mode == "forward") {
    result = RankForward(pool, candidates, options);
  } else {
    throw ConfigError("unknown mode '" + config.mode +
                      "' (expected single or forward)");
  }

  auto entry_rows = [&](const std::vector<const RankingEntry *> &entries,
                        TextTable *text_table, TextTable *csv_table) {
    int rank = 0;
    for (const auto *e : entries) {
      ++rank;
      if (e->failed) {
        text_table->rows.push_back(
            {std::to_string(rank), e->label, "failed", "", "", ""});
        csv_table->rows.push_back(
            {std::to_string(rank), e->label, "", "", "", ""});
        continue;
      }
      // Coefficient of the candidate's own (or last-added) predictor.
      const LmeFit &fit = *e->fit;
      int ci = static_cast<int>(fit.coef_names.size()) - 1;
      for (size_t k = 0; k < fit.coef_names.size(); ++k)
        if (fit.coef_names[k] == e->label) ci = static_cast<int>(k);
      text_table->rows.push_back(
          {std::to_string(rank), e->label, FormatFixed(e->r, 3),
           FormatFixed(fit.beta[ci], 2), FormatFixed(fit.se[ci], 3),
           FormatFixed(fit.t_values[ci], 2)});
      csv_table->rows.push_back(
          {std::to_string(rank), e->label, FormatDouble(e->r),
           FormatDouble(fit.beta[ci]), FormatDouble(fit.se[ci]),
           FormatDouble(fit.t_values[ci])});
    }
  };

  std::ostringstream text;
  text << "Ranking (" << config.mode << ", " << config.scope << ", "
       << CriterionName(options.criterion) << ")\n";
  TextTable csv_table;
  csv_table.header = {"rank", "label", "r", "estimate", "se", "t"};
  if (per_feature && config.mode == "single") {
    // Two-block layout: mean distances, then standard-deviation distances,
    // each ranked within its block.
    for (StatKind stat : {StatKind::kMean, StatKind::kStd}) {
      std::vector<const RankingEntry *> block;
      for (const auto &e : result.entries) {
        Column c = ParseColumnLabel(e.label);
        if (c.stat == stat) block.push_back(&e);
      }
      TextTable table;
      table.header = {"rank", "label", "r", "estimate", "se", "t"};
      entry_rows(block, &table, &csv_table);
      text << "\n" << (stat == StatKind::kMean ? "mean" : "std")
           << " distances:\n" << table.RenderText();
    }
  } else {
    std::vector<const RankingEntry *> all;
    for (const auto &e : result.entries) all.push_back(&e);
    TextTable table;
    table.header = {"rank", "label", "r", "estimate", "se", "t"};
    entry_rows(all, &table, &csv_table);
    text << table.RenderText();
  }

  EnsureOutDir(config.out_dir);
  std::string report_txt = config.out_dir + "/rank_report.txt";
  WriteText(report_txt, text.str());
  std::string report_csv = config.out_dir + "/rank_report.csv";
  WriteText(report_csv, csv_table.RenderCsv());
  auto cfg = CommonConfig(config);
  cfg["mode"] = config.mode;
  cfg["scope"] = config.scope;
  WriteManifest(config.out_dir, "rank", cfg, data.inputs,
                {report_txt, report_csv});
  std::cout << text.str();
  return 0;
}

int CmdAnova(const RunConfig &config) {
  if (config.full_spec.empty() || config.reduced_spec.empty())
    throw ConfigError("anova needs --full and --reduced predictor lists");
  LoadedData data = LoadInputs(config);
  Design pool = BuildDesignPool(data.trials, data.utterances, data.catalog);
  // AIC and the likelihood-ratio test are defined on ML log-likelihoods.
  LmeOptions options;
  options.criterion = Criterion::kML;

  LmeFit full = FitLme(SubsetDesign(pool, SplitCommaList(config.full_spec)),
                       options);
  LmeFit reduced =
      FitLme(SubsetDesign(pool, SplitCommaList(config.reduced_spec)), options);
  LrtResult lrt = LikelihoodRatioTest(full, reduced);

  std::ostringstream text;
  text << "Likelihood-ratio comparison (ML)\n";
  text << "Full:    " << config.full_spec << "  (AIC "
       << FormatFixed(full.aic, 2) << ", logLik "
       << FormatFixed(full.loglik_ml, 2) << ")\n";
  text << "Reduced: " << config.reduced_spec << "  (AIC "
       << FormatFixed(reduced.aic, 2) << ", logLik "
       << FormatFixed(reduced.loglik_ml, 2) << ")\n";
  text << "chi2 = " << FormatFixed(lrt.chi2, 4) << "  df = " << lrt.df
       << "  p = " << FormatDouble(lrt.p_value) << "\n";
  text << "AIC prefers: "
       << (full.aic < reduced.aic ? "full" : full.aic > reduced.aic
                                                 ? "reduced"
                                                 : "neither (tie)")
       << "\n";

  EnsureOutDir(config.out_dir);
  std::string path = config.out_dir + "/anova.txt";
  WriteText(path, text.str());
  nlohmann::json j;
  j["full"] = {{"predictors", config.full_spec}, {"aic", full.aic},
               {"loglik_ml", full.loglik_ml}};
  j["reduced"] = {{"predictors", config.reduced_spec}, {"aic", reduced.aic},
                  {"loglik_ml", reduced.loglik_ml}};
  j["chi2"] = lrt.chi2;
  j["df"] = lrt.df;
  j["p_value"] = lrt.p_value;
  std::string jpath = config.out_dir + "/anova.json";
  WriteText(jpath, j.dump(2) + "\n");
  auto cfg = CommonConfig(config);
  cfg["full"] = config.full_spec;
  cfg["reduced"] = config.reduced_spec;
  WriteManifest(config.out_dir, "anova", cfg, data.inputs, {path, jpath});
  std::cout << text.str();
  return 0;
}

int CmdDiag(const RunConfig &config) {
  if (config.fit_path.empty())
    throw ConfigError("diag needs --fit pointing at a fit.json artifact");
  std::ifstream in(config.fit_path);
  if (!in)
    throw IoError("missing fit artifact '" + config.fit_path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  LmeFit fit = DeserializeFit(ss.str());

  DiagnosticBundle bundle = BuildDiagnostics(fit);
  EnsureOutDir(config.out_dir);
  std::vector<std::string> outputs =
      WriteDiagnostics(config.out_dir, bundle, !config.no_svg);
  auto cfg = CommonConfig(config);
  cfg["fit"] = config.fit_path;
  WriteManifest(config.out_dir, "diag", cfg, {config.fit_path}, outputs);
  std::cout << "scatter r = " << FormatFixed(bundle.scatter.r, 3)
            << "  residual sd = " << FormatFixed(bundle.summary.residual_sd, 3)
            << "  speaker sd = " << FormatFixed(bundle.summary.speaker_sd, 3)
            << "\n";
  return 0;
}

int CmdSynth(const RunConfig &config) {
  FeatureCatalog catalog = LoadCatalogOrDefault(config);
  SynthSpec spec;
  spec.n_speakers = config.n_speakers;
  spec.trials_per_speaker = config.trials_per_speaker;
  spec.sigma_b = config.sigma_b;
  spec.sigma = config.sigma;
  spec.seed = config.seed;
  std::vector<double> beta;
  for (const auto &tok : SplitCommaList(config.beta_spec)) {
    auto v = ParseDouble(tok);
    if (!v) throw ConfigError("bad beta value '" + tok + "'");
    beta.push_back(*v);
  }
  spec.beta = Eigen::Map<Eigen::VectorXd>(beta.data(), beta.size());
  spec.predictor_selection = SplitCommaList(config.synth_predictors);

  SynthOutput out = config.null_model ? NullGenerate(spec, catalog)
                                      : Generate(spec, catalog);
  EnsureOutDir(config.out_dir);
  std::vector<std::string> outputs = WriteSynth(config.out_dir, catalog, out);
  auto cfg = CommonConfig(config);
  cfg["seed"] = std::to_string(config.seed);
  cfg["n_speakers"] = std::to_string(config.n_speakers);
  cfg["trials_per_speaker"] = std::to_string(config.trials_per_speaker);
  cfg["beta"] = config.beta_spec;
  cfg["predictors"] = config.synth_predictors;
  cfg["sigma_b"] = FormatDouble(config.sigma_b);
  cfg["sigma"] = FormatDouble(config.sigma);
  cfg["null"] = config.null_model ? "true" : "false";
  std::vector<std::string> inputs;
  if (!config.catalog_path.empty()) inputs.push_back(config.catalog_path);
  WriteManifest(config.out_dir, "synth", cfg, inputs, outputs);
  std::cout << "wrote " << outputs.size() << " files to " << config.out_dir
            << "\n";
  return 0;
}

}  // namespace scorelens
