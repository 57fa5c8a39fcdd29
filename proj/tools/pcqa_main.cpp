// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "pcqa/app/commands.hpp"

namespace {

using namespace pcqa;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string subset;
  std::string split;
};

void add_common(CLI::App* cmd, Common& c, bool subset, bool split) {
  cmd->add_option("--config", c.config, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "seed for the dataset, the model and training");
  cmd->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  if (subset) cmd->add_option("--subset", c.subset, "distortion ids (build) or metric names (score)");
  if (split) cmd->add_option("--split", c.split, "test references, or train:test lists such as a,b:c");
}

SplitSpec parse_split(const std::string& text) {
  SplitSpec s;
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    s.test_references = parse_name_list(text);
  } else {
    s.train_references = parse_name_list(text.substr(0, colon));
    s.test_references = parse_name_list(text.substr(colon + 1));
  }
  if (s.test_references.empty()) throw ValidationError("--split names no test references");
  return s;
}

AppConfig resolve(const Common& c, const std::string& subset_kind) {
  AppConfig cfg = c.config.empty() ? AppConfig{} : load_config(c.config);
  if (c.seed) {
    cfg.seed = *c.seed;
    cfg.model_seed = *c.seed;
    cfg.train.seed = *c.seed;
  }
  if (!c.subset.empty()) {
    if (subset_kind == "distortions") {
      cfg.distortions = parse_id_list(c.subset);
    } else {
      cfg.metrics.clear();
      for (const auto& name : parse_name_list(c.subset)) cfg.metrics.push_back(MetricId::parse(name));
    }
  }
  if (!c.split.empty()) cfg.split = parse_split(c.split);
  cfg.validate();
  return cfg;
}

int run(int argc, char** argv) {
  CLI::App app{"Point cloud quality dataset builder and ResSCNN trainer"};
  app.require_subcommand(1);
  Common common;

  auto* build = app.add_subcommand("build", "generate degraded clouds and the dataset manifest");
  BuildOptions bo;
  build->add_option("--refs", bo.refs_dir, "directory of reference .ply files")->required();
  build->add_option("--out", bo.out_dir, "output directory")->required();
  add_common(build, common, true, false);

  auto* score = app.add_subcommand("score", "compute full-reference metric scores");
  ScoreOptions so;
  std::string external;
  score->add_option("--manifest", so.manifest)->required()->check(CLI::ExistingFile);
  score->add_option("--out", so.out, "score CSV")->required();
  score->add_option("--external", external, "CSV of scores from external metrics")->check(CLI::ExistingFile);
  add_common(score, common, true, false);

  auto* annotate = app.add_subcommand("annotate", "label every sample with pseudo-MOS");
  AnnotateOptions ao;
  annotate->add_option("--manifest", ao.manifest)->required()->check(CLI::ExistingFile);
  annotate->add_option("--scores", ao.scores)->required()->check(CLI::ExistingFile);
  annotate->add_option("--subjective", ao.subjective, "CSV stimulus_id,subject_id,score")->required();
  annotate->add_option("--out", ao.out, "annotated manifest")->required();
  annotate->add_option("--report-dir", ao.report_dir)->required();
  add_common(annotate, common, false, false);

  auto* train_cmd = app.add_subcommand("train", "train ResSCNN on the training split");
  TrainOptions to;
  std::string loss_curve;
  train_cmd->add_option("--manifest", to.manifest)->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--checkpoint", to.checkpoint, "output checkpoint")->required();
  train_cmd->add_option("--loss-curve", loss_curve, "CSV of per-step losses");
  add_common(train_cmd, common, false, true);

  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on the test split");
  EvalOptions eo;
  eval->add_option("--manifest", eo.manifest)->required()->check(CLI::ExistingFile);
  eval->add_option("--checkpoint", eo.checkpoint)->required()->check(CLI::ExistingFile);
  eval->add_option("--out", eo.out_dir, "report directory")->required();
  add_common(eval, common, false, true);

  auto* report = app.add_subcommand("report", "annotation error statistics or the ablation tables");
  ReportOptions ro;
  report->add_option("--kind", ro.kind)->required()->check(CLI::IsMember({"annotation", "ablation"}));
  report->add_option("--manifest", ro.manifest)->required()->check(CLI::ExistingFile);
  report->add_option("--out", ro.out_dir, "report directory")->required();
  add_common(report, common, false, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::ostream* log = &std::cerr;
  if (build->parsed()) {
    bo.config = resolve(common, "distortions");
    bo.jobs = common.jobs;
    bo.log = log;
    if (const char* path = std::getenv("PCQA_ADAPTERS"); path && *path) bo.adapters = AdapterConfig::load(path);
    const auto s = cmd_build(bo);
    std::cout << s.manifest.string() << ": " << s.rows << " rows, " << s.failures.size() << " failed\n";
  } else if (score->parsed()) {
    so.config = resolve(common, "metrics");
    so.jobs = common.jobs;
    so.log = log;
    if (!external.empty()) so.external_scores = external;
    const auto s = cmd_score(so);
    std::cout << so.out.string() << ": " << s.rows << " scores, " << s.skipped << " skipped\n";
  } else if (annotate->parsed()) {
    ao.config = resolve(common, "");
    ao.log = log;
    const auto s = cmd_annotate(ao);
    std::cout << "holdout PLCC " << format_cell(s.holdout.plcc) << " SROCC " << format_cell(s.holdout.srocc) << '\n';
  } else if (train_cmd->parsed()) {
    to.config = resolve(common, "");
    to.log = log;
    if (!loss_curve.empty()) to.loss_curve = loss_curve;
    const auto s = cmd_train(to);
    std::cout << to.checkpoint.string() << ": " << s.samples << " samples\n";
  } else if (eval->parsed()) {
    eo.config = resolve(common, "");
    eo.jobs = common.jobs;
    eo.log = log;
    const auto s = cmd_eval(eo);
    std::cout << "PLCC " << format_cell(s.overall.plcc) << " SROCC " << format_cell(s.overall.srocc) << '\n';
  } else if (report->parsed()) {
    ro.config = resolve(common, "");
    ro.jobs = common.jobs;
    ro.log = log;
    cmd_report(ro);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const pcqa::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
