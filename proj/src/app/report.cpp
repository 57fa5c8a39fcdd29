// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdio>

#include "pcqa/app/commands.hpp"
#include "pcqa/app/parallel.hpp"
#include "pcqa/frmetrics/scores.hpp"

namespace pcqa {
namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::string> stats_row(const std::string& scope, const std::vector<double>& errors) {
  if (errors.size() < 2) return {scope, std::to_string(errors.size()), "NaN", "NaN", "NaN"};
  const ErrorStats s = annotation_error_stats(errors);
  return {scope, std::to_string(s.count), format_double(s.mean), format_double(s.stddev), format_double(s.q95)};
}

void annotation_report(const ReportOptions& options) {
  const Manifest manifest = Manifest::load(options.manifest);
  manifest.validate(false);
  std::vector<double> all;
  std::map<int, std::vector<double>> by_level;
  for (const auto& r : manifest.records) {
    if (!r.ok() || !r.mos || !r.pseudo_mos) continue;
    all.push_back(*r.mos - *r.pseudo_mos);
    by_level[r.level].push_back(all.back());
  }
  if (all.size() < 2) throw ValidationError("annotation report needs at least 2 samples with MOS and pseudo-MOS");
  const ErrorStats stats = annotation_error_stats(all);

  Table summary{{"scope", "n", "mean", "stddev", "q95_abs"}};
  summary.push_back(stats_row("all", all));
  for (const auto& [level, errors] : by_level) summary.push_back(stats_row("level " + std::to_string(level), errors));

  Table histogram{{"bin_low", "bin_high", "count"}};
  histogram.push_back({"-inf", fixed(-kHistogramLimit, 2), std::to_string(stats.underflow)});
  for (std::size_t b = 0; b < kHistogramBins; ++b) {
    const double lo = -kHistogramLimit + kHistogramBin * static_cast<double>(b);
    histogram.push_back({fixed(lo, 2), fixed(lo + kHistogramBin, 2), std::to_string(stats.histogram[b])});
  }
  histogram.push_back({fixed(kHistogramLimit, 2), "inf", std::to_string(stats.overflow)});

  const std::string note =
      "# error = mos - pseudo_mos; q95_abs is the 95% quantile of |error| (linear interpolation)\n";
  fs::create_directories(options.out_dir);
  write_text_file(options.out_dir / "annotation_error.csv", note + format_csv(summary));
  write_text_file(options.out_dir / "annotation_error.txt", note + format_aligned(summary));
  write_text_file(options.out_dir / "annotation_histogram.csv", format_csv(histogram));
  if (options.log) *options.log << note << format_aligned(summary);
}

struct AblationRun {
  std::string label;
  ModelConfig model;
};

CorrelationCell run_ablation(const AblationRun& run, const AppConfig& config, const std::vector<TrainSample>& train_set,
                             const std::vector<TrainSample>& test_set) {
  TrainConfig tc = config.train;
  auto result = pcqa::train(ResSCNN::initialized(run.model, config.model_seed), train_set, tc);
  std::vector<double> pred, label;
  for (const auto& s : test_set) {
    pred.push_back(predict(result.model, s.cloud, config.voxel_size));
    label.push_back(s.label);
  }
  return correlate(pred, label);
}

void ablation_report(const ReportOptions& options) {
  const AppConfig& config = options.config;
  const Manifest manifest = Manifest::load(options.manifest);
  manifest.validate(true);
  const SplitRows rows = split_by_reference(manifest, config.split);
  if (rows.train.empty() || rows.test.empty()) throw ValidationError("ablation needs non-empty train and test splits");
  const auto train_set = load_training_samples(manifest, rows.train);
  const auto test_set = load_training_samples(manifest, rows.test);

  std::vector<AblationRun> runs;
  for (int depth : config.ablation_depths) {
    ModelConfig m = config.model;
    m.depth = depth;
    runs.push_back({std::to_string(depth), m});
  }
  const std::size_t depth_runs = runs.size();
  for (auto variant : config.ablation_variants) {
    ModelConfig m = config.model;
    m.variant = variant;
    runs.push_back({to_string(variant), m});
  }
  const auto results = parallel_map<CorrelationCell>(runs.size(), options.jobs, [&](std::size_t i) {
    return run_ablation(runs[i], config, train_set, test_set);
  });

  Table depth{{"blocks", "plcc", "srocc"}};
  Table variant{{"residual", "plcc", "srocc"}};
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (results[i].error) std::rethrow_exception(results[i].error);
    const auto& c = *results[i].value;
    (i < depth_runs ? depth : variant).push_back({runs[i].label, format_cell(c.plcc), format_cell(c.srocc)});
  }
  fs::create_directories(options.out_dir);
  write_text_file(options.out_dir / "ablation_depth.csv", format_csv(depth));
  write_text_file(options.out_dir / "ablation_depth.txt", "Network depth\n" + format_aligned(depth));
  write_text_file(options.out_dir / "ablation_residual.csv", format_csv(variant));
  write_text_file(options.out_dir / "ablation_residual.txt", "Residual connection\n" + format_aligned(variant));
  if (options.log) *options.log << format_aligned(depth) << format_aligned(variant);
}

}  // namespace

std::string format_csv(const Table& table) {
  std::string out;
  for (const auto& row : table) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += '\n';
  }
  return out;
}

std::string format_aligned(const Table& table) {
  std::vector<std::size_t> width;
  for (const auto& row : table) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (const auto& row : table) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      line += row[i];
      if (i + 1 < row.size()) line.append(width[i] - row[i].size(), ' ');
    }
    out += line + '\n';
  }
  return out;
}

void cmd_report(const ReportOptions& options) {
  if (options.kind == "annotation") return annotation_report(options);
  if (options.kind == "ablation") return ablation_report(options);
  throw ValidationError("unknown report kind '" + options.kind + "' (expected annotation or ablation)");
}

}  // namespace pcqa
