// scorelens/src/ingest.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "scorelens/ingest.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "scorelens/csv.h"
#include "scorelens/error.h"

namespace scorelens {

void TrialTable::Rebuild() {
  speakers.clear();
  by_speaker.clear();
  for (size_t i = 0; i < trials.size(); ++i) {
    auto it = by_speaker.find(trials[i].speaker_id);
    if (it == by_speaker.end()) {
      speakers.push_back(trials[i].speaker_id);
      by_speaker[trials[i].speaker_id] = {static_cast<int>(i)};
    } else {
      it->second.push_back(static_cast<int>(i));
    }
  }
}

UtteranceTable LoadUtterances(const std::string &path,
                              const FeatureCatalog &catalog, char delimiter) {
  CsvTable csv = ReadCsv(path, delimiter);
  int utt_col = csv.column("utterance_id");
  int spk_col = csv.column("speaker_id");
  if (utt_col < 0) throw ConfigError(path + ": missing column 'utterance_id'");
  if (spk_col < 0) throw ConfigError(path + ": missing column 'speaker_id'");
  std::vector<int> feature_cols;
  for (const auto &c : catalog.columns()) {
    int idx = csv.column(ColumnHeader(c));
    if (idx < 0)
      throw ConfigError(path + ": missing column '" + ColumnHeader(c) + "'");
    feature_cols.push_back(idx);
  }
  UtteranceTable table;
  for (size_t r = 0; r < csv.rows.size(); ++r) {
    const auto &row = csv.rows[r];
    if (row.size() != csv.header.size())
      throw IoError(path + ": row " + std::to_string(r + 1) + " has " +
                    std::to_string(row.size()) + " fields, expected " +
                    std::to_string(csv.header.size()));
    UtteranceSummary u;
    u.utterance_id = row[utt_col];
    u.speaker_id = row[spk_col];
    if (u.utterance_id.empty())
      throw ConfigError(path + ": row " + std::to_string(r + 1) +
                        " has empty utterance_id");
    u.values.reserve(feature_cols.size());
    for (int c : feature_cols) {
      auto v = ParseDouble(row[c]);
      if (!v || !std::isfinite(*v)) {
        u.values.push_back(std::numeric_limits<double>::quiet_NaN());
        u.complete = false;
      } else {
        u.values.push_back(*v);
      }
    }
    if (table.index.count(u.utterance_id))
      throw ConfigError(path + ": duplicate utterance_id '" + u.utterance_id +
                        "'");
    table.index[u.utterance_id] = static_cast<int>(table.rows.size());
    table.rows.push_back(std::move(u));
  }
  return table;
}

TrialTable LoadTrials(const std::string &path,
                      const UtteranceTable &utterances, char delimiter) {
  CsvTable csv = ReadCsv(path, delimiter);
  int enroll_col = csv.column("enroll_id");
  int test_col = csv.column("test_id");
  int spk_col = csv.column("speaker_id");
  int score_col = csv.column("score");
  int label_col = csv.column("label");
  if (enroll_col < 0 || test_col < 0 || spk_col < 0 || score_col < 0)
    throw ConfigError(path +
                      ": expected columns enroll_id,test_id,speaker_id,score");
  TrialTable table;
  for (size_t r = 0; r < csv.rows.size(); ++r) {
    const auto &row = csv.rows[r];
    int rowno = static_cast<int>(r + 1);
    if (row.size() != csv.header.size())
      throw IoError(path + ": row " + std::to_string(rowno) +
                    " has wrong field count");
    TrialRecord t;
    t.enroll_id = row[enroll_col];
    t.test_id = row[test_col];
    t.speaker_id = row[spk_col];
    if (label_col >= 0 && row[label_col] != "target") {
      table.rejections.push_back({rowno, "label '" + row[label_col] +
                                             "' is not 'target'"});
      continue;
    }
    if (t.enroll_id == t.test_id) {
      table.rejections.push_back({rowno, "enroll and test utterance are the "
                                         "same ('" + t.enroll_id + "')"});
      continue;
    }
    const UtteranceSummary *enroll = utterances.find(t.enroll_id);
    const UtteranceSummary *test = utterances.find(t.test_id);
    if (!enroll) {
      table.rejections.push_back({rowno, "unknown utterance '" + t.enroll_id +
                                             "'"});
      continue;
    }
    if (!test) {
      table.rejections.push_back({rowno, "unknown utterance '" + t.test_id +
                                             "'"});
      continue;
    }
    // The random effect keys on speaker, so a label mismatch would silently
    // corrupt grouping; treat it as fatal rather than a row rejection.
    if (enroll->speaker_id != t.speaker_id || test->speaker_id != t.speaker_id)
      throw ConfigError(path + ": row " + std::to_string(rowno) +
                        ": speaker_id '" + t.speaker_id +
                        "' disagrees with the utterance table");
    auto score = ParseDouble(row[score_col]);
    if (!score || !std::isfinite(*score)) {
      table.rejections.push_back({rowno, "non-finite score '" + row[score_col] +
                                             "'"});
      continue;
    }
    t.score = *score;
    table.trials.push_back(std::move(t));
  }
  table.Rebuild();
  return table;
}

TrialTable SplitBySpeakerSet(const TrialTable &table,
                             const std::vector<std::string> &speakers) {
  if (speakers.empty()) throw ConfigError("speaker selection is empty");
  std::set<std::string> wanted(speakers.begin(), speakers.end());
  TrialTable out;
  for (const auto &t : table.trials)
    if (wanted.count(t.speaker_id)) out.trials.push_back(t);
  if (out.trials.empty()) throw StatError("no trials for selection");
  out.Rebuild();
  return out;
}

void WriteUtterances(const std::string &path, const FeatureCatalog &catalog,
                     const UtteranceTable &table, char delimiter) {
  std::vector<std::string> header = {"utterance_id", "speaker_id"};
  for (const auto &c : catalog.columns()) header.push_back(ColumnHeader(c));
  std::vector<std::vector<std::string>> rows;
  rows.reserve(table.rows.size());
  for (const auto &u : table.rows) {
    std::vector<std::string> row = {u.utterance_id, u.speaker_id};
    for (double v : u.values)
      row.push_back(std::isfinite(v) ? FormatDouble(v) : "NA");
    rows.push_back(std::move(row));
  }
  WriteCsv(path, header, rows, delimiter);
}

void WriteTrials(const std::string &path, const TrialTable &table,
                 char delimiter) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(table.trials.size());
  for (const auto &t : table.trials)
    rows.push_back(
        {t.enroll_id, t.test_id, t.speaker_id, FormatDouble(t.score)});
  WriteCsv(path, {"enroll_id", "test_id", "speaker_id", "score"}, rows,
           delimiter);
}

double HzToSemitones(double hz) {
  if (hz <= 0.0) throw StatError("semitone conversion needs a positive Hz value");
  return 12.0 * std::log2(hz / 27.5);
}

std::vector<std::string> LoadSpeakerList(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open speaker list '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace scorelens
