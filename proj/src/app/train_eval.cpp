// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>

#include "pcqa/app/commands.hpp"
#include "pcqa/app/parallel.hpp"
#include "pcqa/frmetrics/scores.hpp"
#include "pcqa/pcio/ply.hpp"
#include "pcqa/sparsenn/checkpoint.hpp"

namespace pcqa {
namespace {

Manifest load_for_split(const fs::path& path, const AppConfig& config, SplitRows& rows) {
  Manifest manifest = Manifest::load(path);
  manifest.validate(true);
  rows = split_by_reference(manifest, config.split);
  return manifest;
}

TrainConfig with_label_scale(TrainConfig cfg, const LabelScale& scale) {
  cfg.label_min = scale.min;
  cfg.label_max = scale.max;
  return cfg;
}

}  // namespace

double sample_label(const ManifestRecord& record) {
  if (record.pseudo_mos) return *record.pseudo_mos;
  if (record.mos) return *record.mos;
  throw ValidationError("sample '" + record.sample_id + "' has no label; run annotate first");
}

std::vector<TrainSample> load_training_samples(const Manifest& manifest, const std::vector<std::size_t>& rows) {
  std::vector<TrainSample> out;
  out.reserve(rows.size());
  for (std::size_t i : rows) {
    const auto& r = manifest.records.at(i);
    out.push_back({r.sample_id, load_ply(r.path), sample_label(r)});
  }
  return out;
}

TrainSummary cmd_train(const TrainOptions& options) {
  const AppConfig& config = options.config;
  SplitRows rows;
  const Manifest manifest = load_for_split(options.manifest, config, rows);
  if (rows.train.empty()) throw ValidationError("training split is empty");
  const auto samples = load_training_samples(manifest, rows.train);

  auto result = train(ResSCNN::initialized(config.model, config.model_seed), samples,
                      with_label_scale(config.train, manifest.header.label_scale),
                      [&](const ResSCNN&, int epoch) {
                        if (options.log && epoch % 10 == 0) *options.log << "epoch " << epoch << '\n';
                      });
  save_checkpoint(result.model, options.checkpoint);
  if (options.loss_curve) {
    std::ofstream out(*options.loss_curve);
    if (!out) throw RuntimeError("cannot write loss curve: " + options.loss_curve->string());
    write_loss_curve(out, result.curve);
  }
  if (options.log) {
    for (const auto& w : result.warnings) *options.log << "warning: " << w << '\n';
    *options.log << "train: " << samples.size() << " samples, " << result.curve.size()
                 << " steps, final loss " << format_double(result.last_epoch_mean_loss) << '\n';
  }
  return {samples.size(), result.last_epoch_mean_loss};
}

EvalSummary cmd_eval(const EvalOptions& options) {
  const AppConfig& config = options.config;
  SplitRows rows;
  const Manifest manifest = load_for_split(options.manifest, config, rows);
  if (rows.test.empty()) throw ValidationError("test split is empty");
  const ResSCNN model = load_checkpoint(options.checkpoint, config.model);

  const auto results = parallel_map<double>(rows.test.size(), options.jobs, [&](std::size_t k) {
    return predict(model, load_ply(manifest.records[rows.test[k]].path), config.voxel_size);
  });

  Table predictions{{"sample_id", "reference_id", "distortion_id", "level", "label", "prediction"}};
  std::vector<double> pred_all, label_all;
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_type;
  for (std::size_t k = 0; k < rows.test.size(); ++k) {
    if (results[k].error) std::rethrow_exception(results[k].error);
    const auto& r = manifest.records[rows.test[k]];
    const double label = sample_label(r);
    const double p = *results[k].value;
    predictions.push_back({r.sample_id, r.reference_id, std::to_string(r.distortion_id), std::to_string(r.level),
                           format_double(label), format_double(p)});
    pred_all.push_back(p);
    label_all.push_back(label);
    by_type[r.distortion_id].first.push_back(p);
    by_type[r.distortion_id].second.push_back(label);
  }

  EvalSummary summary;
  summary.overall = correlate(pred_all, label_all);
  for (const auto& [id, v] : by_type) summary.per_type[id] = correlate(v.first, v.second);

  Table report{{"scope", "distortion", "n", "plcc", "srocc"}};
  report.push_back({"overall", "all", std::to_string(summary.overall.n), format_cell(summary.overall.plcc),
                    format_cell(summary.overall.srocc)});
  for (const auto& [id, c] : summary.per_type)
    report.push_back({std::to_string(id), std::string(describe_distortion(id).name), std::to_string(c.n),
                      format_cell(c.plcc), format_cell(c.srocc)});

  fs::create_directories(options.out_dir);
  write_text_file(options.out_dir / "predictions.csv", format_csv(predictions));
  write_text_file(options.out_dir / "eval.csv", format_csv(report));
  write_text_file(options.out_dir / "eval.txt", "Metric performance (PLCC and SROCC)\n" + format_aligned(report));
  if (options.log) *options.log << format_aligned(report);
  return summary;
}

}  // namespace pcqa
