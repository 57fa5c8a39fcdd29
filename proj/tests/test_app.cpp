// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "pcqa/app/commands.hpp"
#include "pcqa/app/parallel.hpp"
#include "pcqa/distort/registry.hpp"
#include "pcqa/frmetrics/scores.hpp"
#include "pcqa/sparsenn/checkpoint.hpp"
#include "support/pipeline.hpp"

namespace pcqa {
namespace {

using testing::read_file;
using testing::ScratchDir;

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

TEST(Config, DefaultsAndParsing) {
  const AppConfig d = parse_config("{}");
  EXPECT_EQ(d.distortion_ids().size(), 23u);
  EXPECT_EQ(d.metric_ids().size(), 6u);
  EXPECT_EQ(d.regression, RegressionKind::logistic5);

  const AppConfig c = parse_config(R"({"seed": 9, "distortions": "2,5-7", "metrics": ["PSNRyuv", "PCQM"],
    "annotate": {"holdout_references": ["r2"], "regression": "cubic4"},
    "model": {"depth": 2, "variant": "B", "pooling": "max", "seed": 4},
    "train": {"lr": 0.01, "accumulation": 1, "augmentation": false}})");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.distortion_ids(), (std::vector<int>{2, 5, 6, 7}));
  EXPECT_EQ(c.metric_ids()[1], MetricId::external("PCQM"));
  EXPECT_EQ(c.holdout_references, (std::vector<std::string>{"r2"}));
  EXPECT_EQ(c.regression, RegressionKind::cubic4);
  EXPECT_EQ(c.model.depth, 2);
  EXPECT_EQ(c.model.variant, ResidualVariant::B);
  EXPECT_EQ(c.model.pooling, PoolMode::max);
  EXPECT_EQ(c.model_seed, 4u);
  EXPECT_EQ(c.train.lr, 0.01);
  EXPECT_FALSE(c.train.augmentation);

  EXPECT_THROW(parse_config(R"({"sed": 1})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"model": {"depth": 0}})"), ValidationError);
  EXPECT_THROW(parse_config("{not json"), ValidationError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ValidationError);
}

TEST(Config, IdLists) {
  EXPECT_EQ(parse_id_list("1,2,5-7"), (std::vector<int>{1, 2, 5, 6, 7}));
  EXPECT_THROW(parse_id_list("7-5"), ValidationError);
  EXPECT_THROW(parse_id_list("x"), ValidationError);
  EXPECT_EQ(parse_name_list("a,b"), (std::vector<std::string>{"a", "b"}));
}

TEST(Parallel, ResultsIndependentOfJobs) {
  auto square = [](std::size_t i) { return static_cast<int>(i * i); };
  const auto one = parallel_map<int>(50, 1, square);
  const auto many = parallel_map<int>(50, 8, square);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(*one[i].value, *many[i].value);
  const auto failing = parallel_map<int>(3, 2, [](std::size_t i) -> int {
    if (i == 1) throw RuntimeError("boom");
    return 0;
  });
  EXPECT_TRUE(failing[1].error);
  EXPECT_FALSE(failing[0].error);
}

// Two references, three distortions: one geometric, two color-only.
class SmallPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new ScratchDir("app_pipeline");
    testing::write_references(*dir_ / "refs", 2, 14);
    BuildOptions b;
    b.refs_dir = *dir_ / "refs";
    b.out_dir = *dir_ / "data";
    b.config = config();
    b.jobs = 2;
    build_ = new BuildSummary(cmd_build(b));
  }
  static void TearDownTestSuite() {
    delete build_;
    delete dir_;
  }
  static AppConfig config() {
    AppConfig c = parse_config(R"({"seed": 3, "distortions": "2,17,22"})");
    return c;
  }
  static fs::path manifest() { return *dir_ / "data" / "manifest.jsonl"; }
  static fs::path scores() {
    const fs::path out = *dir_ / "scores.csv";
    if (!fs::exists(out)) {
      ScoreOptions s;
      s.manifest = manifest();
      s.out = out;
      s.config = config();
      cmd_score(s);
    }
    return out;
  }

  static ScratchDir* dir_;
  static BuildSummary* build_;
};

ScratchDir* SmallPipeline::dir_ = nullptr;
BuildSummary* SmallPipeline::build_ = nullptr;

TEST_F(SmallPipeline, BuildWritesOneRowPerLevel) {
  EXPECT_EQ(build_->rows, 42u);
  EXPECT_TRUE(build_->failures.empty());
  const Manifest m = Manifest::load(manifest());
  ASSERT_EQ(m.records.size(), 42u);
  EXPECT_EQ(m.records.front().sample_id, "r0_d02_l1");
  EXPECT_EQ(m.records.back().sample_id, "r1_d22_l7");
  EXPECT_NO_THROW(m.validate(true));
  EXPECT_EQ(m.reference_ids(), (std::vector<std::string>{"r0", "r1"}));
  const std::string text = read_file(manifest());
  EXPECT_EQ(text.find(dir_->path().string()), std::string::npos) << "paths must be stored relative";
}

TEST_F(SmallPipeline, BuildIsDeterministicAcrossJobCounts) {
  ScratchDir other("app_pipeline_jobs");
  BuildOptions b;
  b.refs_dir = *dir_ / "refs";
  b.out_dir = other / "data";
  b.config = config();
  b.jobs = 1;
  cmd_build(b);
  // Header reference paths are relative to each output dir; sample rows must match.
  auto rows = [](const std::string& text) { return text.substr(text.find('\n')); };
  EXPECT_EQ(rows(read_file(other / "data" / "manifest.jsonl")), rows(read_file(manifest())));
  for (const char* id : {"r0_d02_l3", "r1_d17_l7", "r0_d22_l1"}) {
    const std::string leaf = std::string(id) + ".ply";
    EXPECT_EQ(read_file(other / "data" / "samples" / leaf), read_file(*dir_ / "data" / "samples" / leaf)) << id;
  }
}

TEST_F(SmallPipeline, ManifestRoundTripAndValidation) {
  Manifest m = Manifest::load(manifest());
  ScratchDir tmp("app_manifest");
  m.records[0].mos = 3.25;
  m.records[0].source_metric = "PSNRyuv";
  m.save(tmp / "copy.jsonl");
  const Manifest back = Manifest::load(tmp / "copy.jsonl");
  EXPECT_EQ(back.records[0].mos, 3.25);
  EXPECT_EQ(back.records[0].path, m.records[0].path);
  EXPECT_EQ(back.header.references, m.header.references);

  Manifest bad = m;
  bad.records[1].sample_id = bad.records[0].sample_id;
  EXPECT_THROW(bad.validate(false), ValidationError);
  bad = m;
  bad.records[0].pseudo_mos = 6.0;
  EXPECT_THROW(bad.validate(false), ValidationError);
  bad = m;
  bad.records[0].reference_id = "nope";
  EXPECT_THROW(bad.validate(false), ValidationError);
}

TEST_F(SmallPipeline, SplitByReference) {
  const Manifest m = Manifest::load(manifest());
  const auto rows = split_by_reference(m, {{}, {"r1"}});
  EXPECT_EQ(rows.train.size(), 21u);
  EXPECT_EQ(rows.test.size(), 21u);
  for (auto i : rows.train) EXPECT_EQ(m.records[i].reference_id, "r0");
  EXPECT_THROW(split_by_reference(m, {{"r1"}, {"r1"}}), ValidationError);
  EXPECT_THROW(split_by_reference(m, {{}, {"r9"}}), ValidationError);
}

TEST_F(SmallPipeline, ScoreSkipsGeometryMetricsForColorDistortions) {
  const auto s = read_scores(scores());
  // 14 geometric rows score all six metrics, 28 color-only rows score two.
  EXPECT_EQ(s.size(), 14u * 6 + 28u * 2);
  for (const auto& row : s) {
    const int id = std::stoi(row.degraded_id.substr(4, 2));
    if (row.metric.is_geometric()) EXPECT_EQ(id, 17);
    EXPECT_TRUE(std::isfinite(row.value));
  }
}

TEST_F(SmallPipeline, ScoreRejectsCollidingExternalNames) {
  ScratchDir tmp("app_external");
  {
    std::ofstream ext(tmp / "ext.csv");
    ext << "metric_name,reference_id,degraded_id,value\nPSNRyuv,r0,r0_d02_l1,1\n";
  }
  ScoreOptions s;
  s.manifest = manifest();
  s.out = tmp / "scores.csv";
  s.config = config();
  s.external_scores = tmp / "ext.csv";
  EXPECT_THROW(cmd_score(s), ValidationError);
}

TEST_F(SmallPipeline, AnnotateNeedsSubjectiveFile) {
  ScratchDir tmp("app_annotate_missing");
  AnnotateOptions a;
  a.manifest = manifest();
  a.scores = scores();
  a.subjective = tmp / "absent.csv";
  a.out = tmp / "annotated.jsonl";
  a.report_dir = tmp / "report";
  a.config = config();
  EXPECT_THROW(cmd_annotate(a), ValidationError);
}

TEST_F(SmallPipeline, AnnotateWithoutHoldoutMirrorsFitSet) {
  ScratchDir tmp("app_annotate");
  const Manifest m = Manifest::load(manifest());
  testing::write_ratings(m, tmp / "ratings.csv", 5);
  AnnotateOptions a;
  a.manifest = manifest();
  a.scores = scores();
  a.subjective = tmp / "ratings.csv";
  a.out = tmp / "annotated.jsonl";
  a.report_dir = tmp / "report";
  a.config = config();
  const auto summary = cmd_annotate(a);
  EXPECT_TRUE(summary.holdout_degenerate);
  EXPECT_TRUE(std::any_of(summary.warnings.begin(), summary.warnings.end(),
                          [](const std::string& w) { return w.find("holdout") != std::string::npos; }));
  EXPECT_EQ(summary.holdout.n, summary.fit.n);
  EXPECT_EQ(summary.holdout.srocc, summary.fit.srocc);
  EXPECT_EQ(summary.selection.size(), 3u);
  EXPECT_FALSE(summary.selection.at(2).metric.is_geometric());

  const Manifest annotated = Manifest::load(a.out);
  for (const auto& r : annotated.records) {
    ASSERT_TRUE(r.pseudo_mos.has_value());
    EXPECT_GE(*r.pseudo_mos, 1.0);
    EXPECT_LE(*r.pseudo_mos, 5.0);
    EXPECT_TRUE(r.source_metric.has_value());
  }
  for (const char* f : {"selection.csv", "selection.txt", "candidates.csv", "holdout.csv", "holdout.txt"})
    EXPECT_TRUE(fs::exists(a.report_dir / f)) << f;
  EXPECT_EQ(read_file(a.report_dir / "selection.csv").substr(0, 31), "distortion_id,distortion,n,metr");
}

TEST_F(SmallPipeline, AnnotateRejectsUnknownHoldoutReference) {
  ScratchDir tmp("app_annotate_holdout");
  testing::write_ratings(Manifest::load(manifest()), tmp / "ratings.csv", 5);
  AnnotateOptions a;
  a.manifest = manifest();
  a.scores = scores();
  a.subjective = tmp / "ratings.csv";
  a.out = tmp / "annotated.jsonl";
  a.report_dir = tmp / "report";
  a.config = config();
  a.config.holdout_references = {"r7"};
  EXPECT_THROW(cmd_annotate(a), ValidationError);
}

TEST_F(SmallPipeline, EvalOfConstantModelReportsNaN) {
  ScratchDir tmp("app_eval");
  Manifest m = Manifest::load(manifest());
  for (std::size_t i = 0; i < m.records.size(); ++i) m.records[i].mos = 1.0 + static_cast<double>(i % 5);
  m.save(tmp / "labeled.jsonl");
  AppConfig c = config();
  c.model.depth = 1;
  c.model.width = 4;
  c.model.hidden = 4;
  c.split.test_references = {"r1"};
  save_checkpoint(ResSCNN(c.model), tmp / "zero.ckpt");
  EvalOptions e;
  e.manifest = tmp / "labeled.jsonl";
  e.checkpoint = tmp / "zero.ckpt";
  e.out_dir = tmp / "eval";
  e.config = c;
  const auto summary = cmd_eval(e);
  EXPECT_EQ(summary.overall.n, 21u);
  EXPECT_FALSE(summary.overall.plcc.has_value());
  const std::string csv = read_file(e.out_dir / "eval.csv");
  EXPECT_NE(csv.find("overall,all,21,NaN,NaN"), std::string::npos) << csv;
  EXPECT_EQ(line_count(read_file(e.out_dir / "predictions.csv")), 22u);

  c.model.width = 8;
  e.config = c;
  EXPECT_THROW(cmd_eval(e), ValidationError);
}

TEST_F(SmallPipeline, TrainNeedsLabels) {
  ScratchDir tmp("app_train");
  TrainOptions t;
  t.manifest = manifest();
  t.checkpoint = tmp / "m.ckpt";
  t.config = config();
  EXPECT_THROW(cmd_train(t), ValidationError);
}

TEST(Report, TableFormatting) {
  const Table t{{"a", "bb"}, {"ccc", "d"}};
  EXPECT_EQ(format_csv(t), "a,bb\nccc,d\n");
  const std::string aligned = format_aligned(t);
  EXPECT_EQ(aligned.substr(0, aligned.find('\n')), "a    bb");
}

}  // namespace
}  // namespace pcqa
