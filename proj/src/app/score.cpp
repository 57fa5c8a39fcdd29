// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <set>

#include "pcqa/app/commands.hpp"
#include "pcqa/app/parallel.hpp"
#include "pcqa/frmetrics/scores.hpp"
#include "pcqa/pcio/ply.hpp"

namespace pcqa {
namespace {

// A cloud with its search index and, when plane metrics need them, normals.
struct Indexed {
  PointCloud cloud;
  KdTree tree;
  Indexed(PointCloud c, bool normals) : cloud(normals ? with_normals(c) : std::move(c)), tree(cloud) {}
};

bool needs_normals(const std::vector<MetricId>& metrics) {
  return std::any_of(metrics.begin(), metrics.end(), [](const MetricId& m) {
    return m.kind == MetricKind::m_p2pl || m.kind == MetricKind::h_p2pl;
  });
}

// Same values as compute_metric, sharing indices and normals across metrics.
double metric_value(const MetricId& m, const Indexed& ref, const Indexed& deg, double cap) {
  const Pooling pooling = m.pooling();
  switch (m.kind) {
    case MetricKind::m_p2po:
    case MetricKind::h_p2po:
      return psnr_from_geometry(
          std::max(p2point(ref.tree, deg.cloud, pooling), p2point(deg.tree, ref.cloud, pooling)), ref.cloud, cap);
    case MetricKind::m_p2pl:
    case MetricKind::h_p2pl:
      return psnr_from_geometry(std::max(p2plane(ref.cloud, ref.tree, deg.cloud, pooling),
                                         p2plane(deg.cloud, deg.tree, ref.cloud, pooling)),
                                ref.cloud, cap);
    case MetricKind::psnr_yuv:
    case MetricKind::h_psnr_yuv: {
      const auto f = yuv_errors(ref.cloud, ref.tree, deg.cloud, pooling);
      const auto b = yuv_errors(deg.cloud, deg.tree, ref.cloud, pooling);
      return combine_yuv_psnr({std::max(f[0], b[0]), std::max(f[1], b[1]), std::max(f[2], b[2])}, cap);
    }
    case MetricKind::external:
      break;
  }
  throw ValidationError("metric " + m.name() + " is external; supply it with --external");
}

}  // namespace

ScoreSummary cmd_score(const ScoreOptions& options) {
  const Manifest manifest = Manifest::load(options.manifest);
  manifest.validate(true);
  std::vector<MetricId> builtin;
  std::vector<MetricId> external_requested;
  for (const auto& m : options.config.metric_ids()) (m.kind == MetricKind::external ? external_requested : builtin).push_back(m);
  const bool normals = needs_normals(builtin);
  const double cap = manifest.header.psnr_cap;

  std::map<std::string, Indexed> refs;
  for (const auto& [id, path] : manifest.header.references) refs.try_emplace(id, load_ply(path), normals);

  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    if (manifest.records[i].ok()) rows.push_back(i);
  }
  const auto results = parallel_map<std::vector<MetricScore>>(rows.size(), options.jobs, [&](std::size_t k) {
    const auto& r = manifest.records[rows[k]];
    const auto& descriptor = describe_distortion(r.distortion_id);
    std::vector<MetricScore> out;
    std::optional<Indexed> deg;
    for (const auto& m : builtin) {
      if (!metric_applicable(m, descriptor)) continue;
      if (!deg) deg.emplace(load_ply(r.path), normals);
      out.push_back({m, metric_value(m, refs.at(r.reference_id), *deg, cap), r.reference_id, r.sample_id});
    }
    return out;
  });

  ScoreSummary summary;
  std::vector<MetricScore> scores;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (results[k].error) std::rethrow_exception(results[k].error);
    const auto& r = manifest.records[rows[k]];
    for (const auto& m : builtin) {
      if (!metric_applicable(m, describe_distortion(r.distortion_id))) {
        ++summary.skipped;
        if (options.log)
          *options.log << "skip " << m.name() << " for " << r.sample_id << " (distortion " << r.distortion_id
                       << " leaves geometry unchanged)\n";
      }
    }
    scores.insert(scores.end(), results[k].value->begin(), results[k].value->end());
  }

  if (options.external_scores) {
    std::set<std::string> known;
    for (const auto& r : manifest.records) known.insert(r.sample_id);
    for (auto& s : ingest_external_scores(*options.external_scores)) {
      if (MetricId::parse(s.metric.name()).kind != MetricKind::external)
        throw ValidationError("external score file reuses the built-in metric name " + s.metric.name());
      if (!known.contains(s.degraded_id))
        throw ValidationError("external score for unknown sample '" + s.degraded_id + "'");
      scores.push_back(std::move(s));
    }
  } else if (!external_requested.empty()) {
    throw ValidationError("metric " + external_requested.front().name() + " is external; supply it with --external");
  }

  write_scores(options.out, scores);
  summary.rows = scores.size();
  if (options.log) *options.log << "score: " << summary.rows << " rows, " << summary.skipped << " skipped\n";
  return summary;
}

}  // namespace pcqa
