// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <vector>

#include "pcqa/frmetrics/metrics.hpp"

namespace pcqa {

struct CandidateScore {
  MetricId metric;
  double srocc = 0.0;
  double plcc = 0.0;
};

struct MetricSelection {
  MetricId metric;
  double srocc = 0.0;
  double plcc = 0.0;
  std::vector<CandidateScore> candidates;  // every usable candidate, in metric order
};

// Per distortion id, candidate metric scores aligned with the MOS vector.
using TypeScores = std::map<int, std::map<MetricId, std::vector<double>>>;

// For each distortion type picks the metric with the largest |SROCC| against
// MOS, ties broken by |PLCC| and then metric order. Metrics inapplicable to
// the type, with fewer than 3 samples or with constant scores are skipped.
std::map<int, MetricSelection> select_best_metric(const TypeScores& scores,
                                                  const std::map<int, std::vector<double>>& mos);

}  // namespace pcqa
