// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcqa/annotate/regression.hpp"
#include "pcqa/frmetrics/metrics.hpp"

namespace pcqa {

struct LabelScale {
  double min = 1.0;
  double max = 5.0;
  void validate() const;
};

// The selected metric of one distortion type and its score-to-MOS mapping.
struct TypeFit {
  MetricId metric;
  RegressionModel model;
};

struct Stimulus {
  std::string degraded_id;
  int distortion_id = 1;
  int level = 1;
  std::optional<double> mos;
};

// Metric values keyed by degraded id.
using ScoreTable = std::map<std::string, std::map<MetricId, double>>;

struct AnnotationRecord {
  std::string degraded_id;
  int distortion_id = 1;
  int level = 1;
  double pseudo_mos = 0.0;
  MetricId source_metric;
  std::optional<double> mos;

  std::optional<double> annotation_error() const {
    return mos ? std::optional<double>(*mos - pseudo_mos) : std::nullopt;
  }
};

// Maps each stimulus's selected-metric score through its type's model and
// clamps to the label scale.
std::vector<AnnotationRecord> generate_pseudo_mos(const std::map<int, TypeFit>& fits,
                                                  const std::vector<Stimulus>& stimuli, const ScoreTable& scores,
                                                  const LabelScale& scale = {});

inline constexpr double kHistogramBin = 0.25;
inline constexpr double kHistogramLimit = 2.5;
inline constexpr std::size_t kHistogramBins = 20;

struct ErrorStats {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  double q95 = 0.0;     // 95% quantile of |error|, linear interpolation
  std::array<std::size_t, kHistogramBins> histogram{};  // [-2.5, 2.5) in 0.25 bins, 2.5 in the last
  std::size_t underflow = 0;
  std::size_t overflow = 0;
};

ErrorStats annotation_error_stats(const std::vector<double>& errors);
ErrorStats annotation_error_stats(const std::vector<AnnotationRecord>& records);

// Linear-interpolation quantile (type 7) of unsorted values.
double quantile(std::vector<double> values, double q);

}  // namespace pcqa
