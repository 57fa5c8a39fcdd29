// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/annotate/selection.hpp"

#include <cmath>

#include "pcqa/annotate/correlation.hpp"

namespace pcqa {
namespace {

constexpr double kTieTolerance = 1e-12;

// True when a ranks strictly ahead of b.
bool better(const CandidateScore& a, const CandidateScore& b) {
  const double sa = std::abs(a.srocc), sb = std::abs(b.srocc);
  if (std::abs(sa - sb) > kTieTolerance) return sa > sb;
  const double pa = std::abs(a.plcc), pb = std::abs(b.plcc);
  if (std::abs(pa - pb) > kTieTolerance) return pa > pb;
  return a.metric < b.metric;
}

}  // namespace

std::map<int, MetricSelection> select_best_metric(const TypeScores& scores,
                                                  const std::map<int, std::vector<double>>& mos) {
  std::map<int, MetricSelection> out;
  for (const auto& [type, metrics] : scores) {
    const auto target = mos.find(type);
    if (target == mos.end()) throw ValidationError("no MOS for distortion type " + std::to_string(type));
    const auto& descriptor = describe_distortion(type);
    MetricSelection selection;
    for (const auto& [metric, values] : metrics) {
      if (!metric_applicable(metric, descriptor)) continue;
      if (values.size() != target->second.size())
        throw ValidationError("metric " + metric.name() + " and MOS differ in length for type " +
                              std::to_string(type));
      if (values.size() < 3) continue;
      try {
        selection.candidates.push_back({metric, srocc(values, target->second), plcc(values, target->second)});
      } catch (const UndefinedCorrelation&) {
        // a metric that does not respond to this type cannot be selected
      }
    }
    if (selection.candidates.empty())
      throw ValidationError("distortion type " + std::to_string(type) + " has no applicable metric");
    const CandidateScore* best = &selection.candidates.front();
    for (const auto& c : selection.candidates) {
      if (better(c, *best)) best = &c;
    }
    selection.metric = best->metric;
    selection.srocc = best->srocc;
    selection.plcc = best->plcc;
    out.emplace(type, std::move(selection));
  }
  return out;
}

}  // namespace pcqa
