// scorelens/include/scorelens/ingest.h
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef SCORELENS_INGEST_H_
#define SCORELENS_INGEST_H_

#include <map>
#include <string>
#include <vector>

#include "scorelens/catalog.h"

namespace scorelens {

// One utterance's summary-statistic vector, in catalog column order.
// Missing (non-numeric) cells are stored as NaN and flag the summary
// incomplete; trials touching incomplete utterances are excluded downstream.
struct UtteranceSummary {
  std::string utterance_id;
  std::string speaker_id;
  std::vector<double> values;
  bool complete = true;
};

struct UtteranceTable {
  std::vector<UtteranceSummary> rows;
  std::map<std::string, int> index;  // utterance_id -> row

  const UtteranceSummary *find(const std::string &utterance_id) const {
    auto it = index.find(utterance_id);
    return it == index.end() ? nullptr : &rows[it->second];
  }
};

struct TrialRecord {
  std::string enroll_id;
  std::string test_id;
  std::string speaker_id;
  double score = 0.0;
};

struct RowRejection {
  int row = 0;  // 1-based data row number
  std::string reason;
};

struct TrialTable {
  std::vector<TrialRecord> trials;
  std::vector<std::string> speakers;              // distinct, in first-seen order
  std::map<std::string, std::vector<int>> by_speaker;
  std::vector<RowRejection> rejections;

  void Rebuild();  // refresh speakers/by_speaker from trials
};

// `utterances.csv`: header `utterance_id,speaker_id` + one column per catalog
// column named `<feature>_<mean|std>`.  Non-numeric feature cells flag the
// row incomplete; a missing header column or duplicate id is a hard error.
UtteranceTable LoadUtterances(const std::string &path,
                              const FeatureCatalog &catalog,
                              char delimiter = ',');

// `trials.csv`: header `enroll_id,test_id,speaker_id,score`.  An optional
// `label` column must read `target`.  Rows referencing unknown utterances,
// with enroll == test, non-target labels, or non-finite scores are rejected
// per row and reported; a speaker mismatch against the utterance table is a
// hard error.
TrialTable LoadTrials(const std::string &path, const UtteranceTable &utterances,
                      char delimiter = ',');

// Sub-table restricted to the listed speakers (used for e.g. per-gender
// analyses).  Throws if no trial survives.
TrialTable SplitBySpeakerSet(const TrialTable &table,
                             const std::vector<std::string> &speakers);

void WriteUtterances(const std::string &path, const FeatureCatalog &catalog,
                     const UtteranceTable &table, char delimiter = ',');
void WriteTrials(const std::string &path, const TrialTable &table,
                 char delimiter = ',');

// Optional converter for F0 inputs delivered in Hz; the model expects
// semitones relative to 27.5 Hz.
double HzToSemitones(double hz);

// Speaker-subset file: one speaker id per line.
std::vector<std::string> LoadSpeakerList(const std::string &path);

}  // namespace scorelens

#endif  // SCORELENS_INGEST_H_
