// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "support/pipeline.hpp"

namespace pcqa {
namespace {

namespace fs = std::filesystem;
using testing::read_file;
using testing::ScratchDir;

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(PCQA_BIN) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  ScratchDir dir("cli_codes");
  const fs::path log = dir / "log.txt";
  EXPECT_EQ(run("--help", log), 0);
  EXPECT_NE(read_file(log).find("annotate"), std::string::npos);
  EXPECT_EQ(run("", log), 1);
  EXPECT_EQ(run("build", log), 1);
  EXPECT_EQ(run("frobnicate", log), 1);
  EXPECT_EQ(run("build --refs " + (dir / "missing").string() + " --out " + (dir / "out").string(), log), 1);
  EXPECT_NE(read_file(log).find("reference directory not found"), std::string::npos);
  EXPECT_EQ(run("report --kind nonsense --manifest " + log.string() + " --out " + dir.path().string(), log), 1);

  testing::write_references(dir / "refs", 1, 6);
  EXPECT_EQ(run("build --refs " + (dir / "refs").string() + " --out " + (dir / "out").string() + " --subset 99", log),
            1);
  // An output path under a regular file cannot be created: a runtime failure.
  std::ofstream(dir / "blocker") << "x";
  EXPECT_EQ(run("build --refs " + (dir / "refs").string() + " --out " + (dir / "blocker" / "out").string() +
                    " --subset 2",
                log),
            2);
}

TEST(Cli, SmallPipelineRuns) {
  ScratchDir dir("cli_pipeline");
  const fs::path log = dir / "log.txt";
  testing::write_references(dir / "refs", 2, 10);
  std::ofstream(dir / "config.json")
      << R"({"seed": 7, "distortions": "2,17", "annotate": {"holdout_references": ["r1"]},
      "split": {"test_references": ["r1"]}, "model": {"depth": 1, "width": 4, "hidden": 4},
      "train": {"max_steps": 12, "accumulation": 2}, "ablation": {"depths": [1, 2], "variants": ["A", "D"]}})";
  const std::string cfg = " --config " + (dir / "config.json").string();
  const std::string p = dir.path().string() + "/";

  ASSERT_EQ(run("build --refs " + p + "refs --out " + p + "data" + cfg, log), 0) << read_file(log);
  ASSERT_EQ(run("score --manifest " + p + "data/manifest.jsonl --out " + p + "scores.csv --jobs 2" + cfg, log), 0)
      << read_file(log);
  testing::write_ratings(Manifest::load(dir / "data" / "manifest.jsonl"), dir / "ratings.csv", 1);
  ASSERT_EQ(run("annotate --manifest " + p + "data/manifest.jsonl --scores " + p + "scores.csv --subjective " + p +
                    "ratings.csv --out " + p + "data/annotated.jsonl --report-dir " + p + "annotation" + cfg,
                log),
            0)
      << read_file(log);
  ASSERT_EQ(run("train --manifest " + p + "data/annotated.jsonl --checkpoint " + p + "model.ckpt --loss-curve " + p +
                    "loss.csv" + cfg,
                log),
            0)
      << read_file(log);
  EXPECT_EQ(testing::read_file(dir / "loss.csv").substr(0, 18), "step,epoch,lr,loss");
  ASSERT_EQ(
      run("eval --manifest " + p + "data/annotated.jsonl --checkpoint " + p + "model.ckpt --out " + p + "eval" + cfg,
          log),
      0)
      << read_file(log);
  EXPECT_TRUE(fs::exists(dir / "eval" / "eval.txt"));
  ASSERT_EQ(run("report --kind annotation --manifest " + p + "data/annotated.jsonl --out " + p + "report" + cfg, log),
            0)
      << read_file(log);
  EXPECT_TRUE(fs::exists(dir / "report" / "annotation_error.csv"));

  // Mismatched architecture at eval time is a usage error.
  ASSERT_EQ(run("eval --manifest " + p + "data/annotated.jsonl --checkpoint " + p + "model.ckpt --out " + p +
                    "eval2 --split r0",
                log),
            1);
}

}  // namespace
}  // namespace pcqa
