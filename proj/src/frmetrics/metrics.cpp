// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/frmetrics/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "pcqa/distort/color_space.hpp"
#include "pcqa/pcio/normals.hpp"

namespace pcqa {
namespace {

struct BuiltinName {
  MetricKind kind;
  const char* name;
};

constexpr BuiltinName kBuiltinNames[] = {
    {MetricKind::m_p2po, "M-p2po"},     {MetricKind::m_p2pl, "M-p2pl"},   {MetricKind::h_p2po, "H-p2po"},
    {MetricKind::h_p2pl, "H-p2pl"},     {MetricKind::psnr_yuv, "PSNRyuv"}, {MetricKind::h_psnr_yuv, "H-PSNRyuv"},
};

void require_nonempty(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) throw ValidationError("metric on an empty cloud");
}

class Pool {
 public:
  explicit Pool(Pooling p) : pooling_(p) {}
  void add(double e) {
    sum_ += e;
    max_ = std::max(max_, e);
    ++n_;
  }
  double value() const { return pooling_ == Pooling::mse ? sum_ / static_cast<double>(n_) : max_; }

 private:
  Pooling pooling_;
  double sum_ = 0.0;
  double max_ = 0.0;
  std::size_t n_ = 0;
};

}  // namespace

MetricId MetricId::external(std::string name) {
  if (name.empty()) throw ValidationError("external metric name must not be empty");
  return MetricId{MetricKind::external, std::move(name)};
}

std::string MetricId::name() const {
  for (const auto& b : kBuiltinNames) {
    if (b.kind == kind) return b.name;
  }
  return external_name;
}

MetricId MetricId::parse(const std::string& name) {
  for (const auto& b : kBuiltinNames) {
    if (name == b.name) return MetricId{b.kind, {}};
  }
  return external(name);
}

bool MetricId::is_geometric() const {
  return kind == MetricKind::m_p2po || kind == MetricKind::m_p2pl || kind == MetricKind::h_p2po ||
         kind == MetricKind::h_p2pl;
}

Pooling MetricId::pooling() const {
  return (kind == MetricKind::h_p2po || kind == MetricKind::h_p2pl || kind == MetricKind::h_psnr_yuv)
             ? Pooling::hausdorff
             : Pooling::mse;
}

std::vector<MetricId> builtin_metrics() {
  std::vector<MetricId> out;
  for (const auto& b : kBuiltinNames) out.push_back(MetricId{b.kind, {}});
  return out;
}

bool metric_applicable(const MetricId& metric, const DistortionDescriptor& distortion) {
  return !metric.is_geometric() || distortion.alters_geometry;
}

double p2point(const KdTree& reference, const PointCloud& degraded, Pooling pooling) {
  if (reference.size() == 0 || degraded.empty()) throw ValidationError("metric on an empty cloud");
  Pool pool(pooling);
  for (const Vec3& p : degraded.positions) pool.add(reference.nearest(p).sq_dist);
  return pool.value();
}

double p2point(const PointCloud& reference, const PointCloud& degraded, Pooling pooling) {
  require_nonempty(reference, degraded);
  return p2point(KdTree(reference), degraded, pooling);
}

double p2point_symmetric(const PointCloud& a, const PointCloud& b, Pooling pooling) {
  return std::max(p2point(a, b, pooling), p2point(b, a, pooling));
}

double p2plane(const PointCloud& reference, const KdTree& index, const PointCloud& degraded, Pooling pooling) {
  require_nonempty(reference, degraded);
  if (!reference.has_normals()) throw ValidationError("p2plane needs reference normals");
  const auto& normals = *reference.normals;
  Pool pool(pooling);
  for (const Vec3& p : degraded.positions) {
    const std::size_t j = index.nearest(p).id;
    const double d = (p - reference.positions[j]).dot(normals[j]);
    pool.add(d * d);
  }
  return pool.value();
}

double p2plane(const PointCloud& reference, const PointCloud& degraded, Pooling pooling) {
  require_nonempty(reference, degraded);
  return p2plane(reference, KdTree(reference), degraded, pooling);
}

PointCloud with_normals(const PointCloud& cloud) {
  if (cloud.has_normals()) return cloud;
  if (cloud.size() < 3) {
    PointCloud out = cloud;
    out.normals = std::vector<Vec3>(cloud.size(), Vec3::UnitZ());
    return out;
  }
  return estimate_normals(cloud, std::min(kDefaultNormalNeighbors, cloud.size())).cloud;
}

double p2plane_symmetric(const PointCloud& a, const PointCloud& b, Pooling pooling) {
  const PointCloud na = with_normals(a);
  const PointCloud nb = with_normals(b);
  return std::max(p2plane(na, b, pooling), p2plane(nb, a, pooling));
}

double psnr_from_peak(double error, double peak, double cap) {
  if (!(error >= 0.0)) throw ValidationError("PSNR of a negative or NaN error");
  if (!(peak > 0.0)) throw ValidationError("PSNR with a zero-extent reference");
  const double peak2 = peak * peak;
  if (error < peak2 * 1e-10) return cap;
  return 10.0 * std::log10(peak2 / error);
}

double psnr_from_geometry(double error, const PointCloud& reference, double cap) {
  return psnr_from_peak(error, bounding_box(reference).diagonal(), cap);
}

std::array<double, 3> yuv_errors(const PointCloud& reference, const KdTree& index, const PointCloud& degraded,
                                 Pooling pooling) {
  require_nonempty(reference, degraded);
  std::array<Pool, 3> pools{Pool(pooling), Pool(pooling), Pool(pooling)};
  for (std::size_t i = 0; i < degraded.size(); ++i) {
    const std::size_t j = index.nearest(degraded.positions[i]).id;
    const auto yd = rgb_to_ycbcr(degraded.colors[i]);
    const auto yr = rgb_to_ycbcr(reference.colors[j]);
    for (int c = 0; c < 3; ++c) pools[c].add((yd[c] - yr[c]) * (yd[c] - yr[c]));
  }
  return {pools[0].value(), pools[1].value(), pools[2].value()};
}

std::array<double, 3> yuv_errors(const PointCloud& reference, const PointCloud& degraded, Pooling pooling) {
  require_nonempty(reference, degraded);
  return yuv_errors(reference, KdTree(reference), degraded, pooling);
}

double combine_yuv_psnr(const std::array<double, 3>& errors, double cap) {
  const double y = psnr_from_peak(errors[0], 255.0, cap);
  const double cb = psnr_from_peak(errors[1], 255.0, cap);
  const double cr = psnr_from_peak(errors[2], 255.0, cap);
  return (6.0 * y + cb + cr) / 8.0;
}

double psnr_yuv(const PointCloud& reference, const PointCloud& degraded, Pooling pooling, double cap) {
  const auto forward = yuv_errors(reference, degraded, pooling);
  const auto backward = yuv_errors(degraded, reference, pooling);
  std::array<double, 3> e{};
  for (int c = 0; c < 3; ++c) e[c] = std::max(forward[c], backward[c]);
  return combine_yuv_psnr(e, cap);
}

double compute_metric(const MetricId& metric, const PointCloud& reference, const PointCloud& degraded,
                      double cap) {
  require_nonempty(reference, degraded);
  const Pooling pooling = metric.pooling();
  switch (metric.kind) {
    case MetricKind::m_p2po:
    case MetricKind::h_p2po:
      return psnr_from_geometry(p2point_symmetric(reference, degraded, pooling), reference, cap);
    case MetricKind::m_p2pl:
    case MetricKind::h_p2pl:
      return psnr_from_geometry(p2plane_symmetric(reference, degraded, pooling), reference, cap);
    case MetricKind::psnr_yuv:
    case MetricKind::h_psnr_yuv:
      return psnr_yuv(reference, degraded, pooling, cap);
    case MetricKind::external:
      break;
  }
  throw ValidationError("metric '" + metric.name() + "' is external and cannot be computed here");
}

}  // namespace pcqa
