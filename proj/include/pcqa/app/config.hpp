// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pcqa/annotate/pseudo_mos.hpp"
#include "pcqa/annotate/regression.hpp"
#include "pcqa/annotate/screening.hpp"
#include "pcqa/frmetrics/metrics.hpp"
#include "pcqa/sparsenn/model.hpp"
#include "pcqa/sparsenn/train.hpp"

namespace pcqa {

struct SplitSpec {
  std::vector<std::string> train_references;  // empty: every reference not in test
  std::vector<std::string> test_references;
};

struct AppConfig {
  std::uint64_t seed = 0;
  std::vector<int> distortions;  // empty selects every native id
  std::vector<MetricId> metrics;  // empty selects every built-in metric
  double psnr_cap = kDefaultPsnrCap;
  LabelScale label_scale;
  double voxel_size = 1.0;

  std::vector<std::string> holdout_references;
  RegressionKind regression = RegressionKind::logistic5;
  std::size_t min_scores = kDefaultMinScores;

  SplitSpec split;
  ModelConfig model;
  TrainConfig train;
  std::uint64_t model_seed = 1;

  std::vector<int> ablation_depths{1, 2, 3, 4, 5};
  std::vector<ResidualVariant> ablation_variants{ResidualVariant::A, ResidualVariant::B, ResidualVariant::C,
                                                 ResidualVariant::D};

  std::vector<int> distortion_ids() const;  // resolved subset
  std::vector<MetricId> metric_ids() const;
  void validate() const;
};

// JSON document; every key is optional. See the README for the schema.
AppConfig parse_config(const std::string& json_text);
AppConfig load_config(const std::filesystem::path& path);

std::vector<int> parse_id_list(const std::string& text);          // "1,2,5-7"
std::vector<std::string> parse_name_list(const std::string& text);  // "a,b"

}  // namespace pcqa
