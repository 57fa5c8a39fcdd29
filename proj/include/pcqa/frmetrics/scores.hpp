// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pcqa/frmetrics/metrics.hpp"

namespace pcqa {

struct MetricScore {
  MetricId metric;
  double value = 0.0;
  std::string reference_id;
  std::string degraded_id;
};

// CSV with header metric_name,reference_id,degraded_id,value. Names that
// match a built-in metric parse to it; ingest_external_scores forces every
// row to an external id.
std::vector<MetricScore> read_scores(std::istream& in);
std::vector<MetricScore> read_scores(const std::filesystem::path& path);
std::vector<MetricScore> ingest_external_scores(const std::filesystem::path& path);
std::vector<MetricScore> ingest_external_scores(std::istream& in);

void write_scores(std::ostream& out, const std::vector<MetricScore>& scores);
void write_scores(const std::filesystem::path& path, const std::vector<MetricScore>& scores);

// Shortest round-trip decimal for a double.
std::string format_double(double v);

}  // namespace pcqa
