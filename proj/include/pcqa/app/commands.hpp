// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pcqa/annotate/pseudo_mos.hpp"
#include "pcqa/annotate/selection.hpp"
#include "pcqa/app/config.hpp"
#include "pcqa/app/manifest.hpp"
#include "pcqa/distort/external.hpp"

namespace pcqa {

namespace fs = std::filesystem;

struct BuildOptions {
  fs::path refs_dir;
  fs::path out_dir;  // receives manifest.jsonl and samples/
  AppConfig config;
  int jobs = 1;
  std::optional<AdapterConfig> adapters;
  std::ostream* log = nullptr;
};

struct BuildSummary {
  fs::path manifest;
  std::size_t rows = 0;
  std::vector<std::string> failures;  // "sample_id: message"
};

// One degraded cloud per (reference, distortion, level). Reference ids are
// the file stems of the *.ply files in refs_dir.
BuildSummary cmd_build(const BuildOptions& options);

struct ScoreOptions {
  fs::path manifest;
  fs::path out;
  AppConfig config;
  int jobs = 1;
  std::optional<fs::path> external_scores;  // merged into the output verbatim
  std::ostream* log = nullptr;
};

struct ScoreSummary {
  std::size_t rows = 0;
  std::size_t skipped = 0;  // inapplicable (metric, distortion) pairs
};

ScoreSummary cmd_score(const ScoreOptions& options);

struct AnnotateOptions {
  fs::path manifest;
  fs::path scores;
  fs::path subjective;
  fs::path out;         // annotated manifest
  fs::path report_dir;  // selection and holdout reports
  AppConfig config;
  std::ostream* log = nullptr;
};

struct CorrelationCell {
  std::size_t n = 0;
  std::optional<double> plcc;   // empty when undefined
  std::optional<double> srocc;
};

CorrelationCell correlate(const std::vector<double>& predicted, const std::vector<double>& target);
std::string format_cell(const std::optional<double>& v);

struct AnnotateSummary {
  std::map<int, MetricSelection> selection;
  std::map<int, RegressionModel> models;
  CorrelationCell fit;
  CorrelationCell holdout;
  bool holdout_degenerate = false;  // no holdout samples; report mirrors the fit set
  std::vector<std::string> warnings;
};

AnnotateSummary cmd_annotate(const AnnotateOptions& options);

struct TrainOptions {
  fs::path manifest;
  fs::path checkpoint;
  std::optional<fs::path> loss_curve;
  AppConfig config;
  std::ostream* log = nullptr;
};

struct TrainSummary {
  std::size_t samples = 0;
  double final_loss = 0.0;
};

TrainSummary cmd_train(const TrainOptions& options);

struct EvalOptions {
  fs::path manifest;
  fs::path checkpoint;
  fs::path out_dir;  // predictions.csv, eval.csv, eval.txt
  AppConfig config;
  int jobs = 1;
  std::ostream* log = nullptr;
};

struct EvalSummary {
  CorrelationCell overall;
  std::map<int, CorrelationCell> per_type;
};

EvalSummary cmd_eval(const EvalOptions& options);

struct ReportOptions {
  std::string kind;  // "annotation" or "ablation"
  fs::path manifest;
  fs::path out_dir;
  AppConfig config;
  int jobs = 1;
  std::ostream* log = nullptr;
};

void cmd_report(const ReportOptions& options);

// Helpers shared by the commands.
std::vector<TrainSample> load_training_samples(const Manifest& manifest, const std::vector<std::size_t>& rows);
double sample_label(const ManifestRecord& record);
void write_text_file(const fs::path& path, const std::string& text);

// Report tables: the first row is the header.
using Table = std::vector<std::vector<std::string>>;
std::string format_csv(const Table& table);
std::string format_aligned(const Table& table);  // space-padded columns

}  // namespace pcqa
