// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include <set>

#include "pcqa/annotate/correlation.hpp"
#include "pcqa/annotate/screening.hpp"
#include "pcqa/app/commands.hpp"
#include "pcqa/frmetrics/scores.hpp"

namespace pcqa {
namespace {

std::string join_params(const std::vector<double>& params) {
  std::string out;
  for (std::size_t i = 0; i < params.size(); ++i) out += (i ? ";" : "") + format_double(params[i]);
  return out;
}

Table selection_table(const std::map<int, MetricSelection>& selection, const std::map<int, RegressionModel>& models,
                      const std::map<int, std::size_t>& counts) {
  Table t{{"distortion_id", "distortion", "n", "metric", "srocc", "plcc", "regression", "rmse", "params"}};
  for (const auto& [id, s] : selection) {
    const auto& m = models.at(id);
    t.push_back({std::to_string(id), std::string(describe_distortion(id).name), std::to_string(counts.at(id)),
                 s.metric.name(), format_double(s.srocc), format_double(s.plcc), to_string(m.kind),
                 format_double(m.rmse), join_params(m.params)});
  }
  return t;
}

// Table 4 layout: one row per type, one SROCC column per metric, "-" where
// the metric was not a candidate.
Table candidate_table(const std::map<int, MetricSelection>& selection) {
  std::set<MetricId> metrics;
  for (const auto& [id, s] : selection) {
    for (const auto& c : s.candidates) metrics.insert(c.metric);
  }
  Table t{{"distortion_id"}};
  for (const auto& m : metrics) t[0].push_back(m.name());
  for (const auto& [id, s] : selection) {
    std::vector<std::string> row{std::to_string(id)};
    for (const auto& m : metrics) {
      std::string cell = "-";
      for (const auto& c : s.candidates) {
        if (c.metric == m) cell = format_double(c.srocc);
      }
      row.push_back(cell);
    }
    t.push_back(std::move(row));
  }
  return t;
}

}  // namespace

CorrelationCell correlate(const std::vector<double>& predicted, const std::vector<double>& target) {
  if (predicted.size() != target.size()) throw ValidationError("correlation of vectors with different lengths");
  CorrelationCell cell;
  cell.n = predicted.size();
  if (cell.n < 2) return cell;
  try {
    cell.plcc = plcc(predicted, target);
  } catch (const UndefinedCorrelation&) {
  }
  try {
    cell.srocc = srocc(predicted, target);
  } catch (const UndefinedCorrelation&) {
  }
  return cell;
}

std::string format_cell(const std::optional<double>& v) { return v ? format_double(*v) : "NaN"; }

AnnotateSummary cmd_annotate(const AnnotateOptions& options) {
  const AppConfig& config = options.config;
  if (!fs::is_regular_file(options.subjective))
    throw ValidationError("subjective score file not found: " + options.subjective.string());
  const RatingMatrix ratings = RatingMatrix::read_csv(options.subjective);
  ratings.validate();

  Manifest manifest = Manifest::load(options.manifest);
  manifest.validate(false);
  for (const auto& stimulus : ratings.stimuli()) {
    if (!manifest.find(stimulus).ok())
      throw ValidationError("subjective scores given for failed sample '" + stimulus + "'");
  }
  ScoreTable table;
  for (const auto& s : read_scores(options.scores)) {
    manifest.find(s.degraded_id);
    table[s.degraded_id][s.metric] = s.value;
  }

  AnnotateSummary summary;
  const ScreeningResult screening = screen_subjects(ratings);
  const MosResult mos = compute_mos(ratings, screening.kept, config.min_scores);
  for (const auto& v : screening.verdicts) {
    if (!v.kept) summary.warnings.push_back("subject " + v.subject + " rejected: " + v.reason);
  }
  summary.warnings.insert(summary.warnings.end(), mos.warnings.begin(), mos.warnings.end());

  const std::set<std::string> holdout_refs(config.holdout_references.begin(), config.holdout_references.end());
  for (const auto& id : holdout_refs) {
    if (!manifest.header.references.contains(id)) throw ValidationError("unknown holdout reference '" + id + "'");
  }

  // Fit rows: labeled and outside the holdout references.
  std::map<int, std::vector<std::size_t>> fit_rows;
  std::set<int> types;
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    auto& r = manifest.records[i];
    if (!r.ok()) continue;
    types.insert(r.distortion_id);
    r.mos.reset();
    if (const auto it = mos.mos.find(r.sample_id); it != mos.mos.end()) {
      r.mos = it->second;
      if (!holdout_refs.contains(r.reference_id)) fit_rows[r.distortion_id].push_back(i);
    }
  }
  for (int id : types) {
    if (!fit_rows.contains(id))
      throw ValidationError("distortion type " + std::to_string(id) + " has no subjectively labeled samples");
  }

  TypeScores type_scores;
  std::map<int, std::vector<double>> type_mos;
  std::map<int, std::size_t> counts;
  for (const auto& [id, rows] : fit_rows) {
    counts[id] = rows.size();
    std::set<MetricId> complete;
    for (const auto& [m, v] : table[manifest.records[rows.front()].sample_id]) complete.insert(m);
    for (std::size_t i : rows) {
      const auto& scores = table[manifest.records[i].sample_id];
      std::erase_if(complete, [&](const MetricId& m) { return !scores.contains(m); });
    }
    for (const auto& m : complete) {
      if (!metric_applicable(m, describe_distortion(id))) continue;
      auto& values = type_scores[id][m];
      for (std::size_t i : rows) values.push_back(table[manifest.records[i].sample_id].at(m));
    }
    for (std::size_t i : rows) type_mos[id].push_back(*manifest.records[i].mos);
  }
  for (int id : types) {
    if (!type_scores.contains(id))
      throw ValidationError("distortion type " + std::to_string(id) + " has no applicable metric");
  }

  summary.selection = select_best_metric(type_scores, type_mos);
  std::map<int, TypeFit> fits;
  for (const auto& [id, sel] : summary.selection) {
    auto model = fit_regression(config.regression, type_scores.at(id).at(sel.metric), type_mos.at(id));
    if (!model.converged)
      summary.warnings.push_back("regression for distortion type " + std::to_string(id) + " did not converge");
    summary.models[id] = model;
    fits[id] = {sel.metric, std::move(model)};
  }

  std::vector<Stimulus> stimuli;
  std::vector<std::size_t> stimulus_rows;
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    const auto& r = manifest.records[i];
    if (!r.ok()) continue;
    stimuli.push_back({r.sample_id, r.distortion_id, r.level, r.mos});
    stimulus_rows.push_back(i);
  }
  const auto records = generate_pseudo_mos(fits, stimuli, table, manifest.header.label_scale);

  std::vector<double> fit_pred, fit_mos, hold_pred, hold_mos;
  for (std::size_t k = 0; k < records.size(); ++k) {
    auto& r = manifest.records[stimulus_rows[k]];
    r.pseudo_mos = records[k].pseudo_mos;
    r.source_metric = records[k].source_metric.name();
    if (!r.mos) continue;
    const bool held = holdout_refs.contains(r.reference_id);
    (held ? hold_pred : fit_pred).push_back(*r.pseudo_mos);
    (held ? hold_mos : fit_mos).push_back(*r.mos);
  }
  summary.fit = correlate(fit_pred, fit_mos);
  summary.holdout_degenerate = hold_pred.empty();
  if (summary.holdout_degenerate) {
    summary.holdout = summary.fit;
    summary.warnings.push_back("no labeled holdout samples; the holdout report repeats the fit set");
  } else {
    summary.holdout = correlate(hold_pred, hold_mos);
  }

  manifest.save(options.out);
  fs::create_directories(options.report_dir);
  const Table sel = selection_table(summary.selection, summary.models, counts);
  write_text_file(options.report_dir / "selection.csv", format_csv(sel));
  write_text_file(options.report_dir / "selection.txt", format_aligned(sel));
  write_text_file(options.report_dir / "candidates.csv", format_csv(candidate_table(summary.selection)));
  Table hold{{"set", "n", "plcc", "srocc"},
             {"fit", std::to_string(summary.fit.n), format_cell(summary.fit.plcc), format_cell(summary.fit.srocc)},
             {summary.holdout_degenerate ? "holdout (= fit)" : "holdout", std::to_string(summary.holdout.n),
              format_cell(summary.holdout.plcc), format_cell(summary.holdout.srocc)}};
  write_text_file(options.report_dir / "holdout.csv", format_csv(hold));
  write_text_file(options.report_dir / "holdout.txt", format_aligned(hold));

  if (options.log) {
    for (const auto& w : summary.warnings) *options.log << "warning: " << w << '\n';
    *options.log << format_aligned(sel) << format_aligned(hold);
  }
  return summary;
}

}  // namespace pcqa
