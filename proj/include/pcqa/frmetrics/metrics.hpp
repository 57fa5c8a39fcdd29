// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <string>
#include <vector>

#include "pcqa/distort/registry.hpp"
#include "pcqa/pcio/kdtree.hpp"
#include "pcqa/pcio/point_cloud.hpp"

namespace pcqa {

inline constexpr double kDefaultPsnrCap = 100.0;

enum class Pooling { mse, hausdorff };

enum class MetricKind { m_p2po, m_p2pl, h_p2po, h_p2pl, psnr_yuv, h_psnr_yuv, external };

// A built-in metric or an externally computed one identified by name.
// Ordering follows the enumeration, then the external name; it is the
// final tie-break when choosing between metrics.
struct MetricId {
  MetricKind kind = MetricKind::m_p2po;
  std::string external_name;

  static MetricId external(std::string name);

  std::string name() const;                   // "M-p2po", ..., or the external name
  static MetricId parse(const std::string& name);  // inverse of name()

  bool is_geometric() const;
  Pooling pooling() const;

  friend auto operator<=>(const MetricId&, const MetricId&) = default;
  friend bool operator==(const MetricId&, const MetricId&) = default;
};

std::vector<MetricId> builtin_metrics();

// Geometry metrics are meaningless when the distortion leaves positions
// untouched; every other pairing applies.
bool metric_applicable(const MetricId& metric, const DistortionDescriptor& distortion);

// One direction: each degraded point against its nearest reference point.
double p2point(const PointCloud& reference, const PointCloud& degraded, Pooling pooling);
double p2point(const KdTree& reference, const PointCloud& degraded, Pooling pooling);
// max over both directions
double p2point_symmetric(const PointCloud& a, const PointCloud& b, Pooling pooling);

// The reference must carry normals.
double p2plane(const PointCloud& reference, const PointCloud& degraded, Pooling pooling);
double p2plane(const PointCloud& reference, const KdTree& index, const PointCloud& degraded, Pooling pooling);
// Estimates normals on either side that lacks them.
double p2plane_symmetric(const PointCloud& a, const PointCloud& b, Pooling pooling);

// Normals for metric use: k shrinks to the cloud size, and clouds with fewer
// than three points get the default (0,0,1).
PointCloud with_normals(const PointCloud& cloud);

// 10 log10(peak^2 / error) with peak = diagonal of the reference box.
double psnr_from_geometry(double error, const PointCloud& reference, double cap = kDefaultPsnrCap);
double psnr_from_peak(double error, double peak, double cap = kDefaultPsnrCap);

// Per-channel (Y, Cb, Cr) squared errors of degraded points against their
// geometric nearest reference point.
std::array<double, 3> yuv_errors(const PointCloud& reference, const PointCloud& degraded, Pooling pooling);
std::array<double, 3> yuv_errors(const PointCloud& reference, const KdTree& index, const PointCloud& degraded,
                                 Pooling pooling);

// Symmetric: per channel the larger error of the two directions.
double psnr_yuv(const PointCloud& reference, const PointCloud& degraded, Pooling pooling,
                double cap = kDefaultPsnrCap);
double combine_yuv_psnr(const std::array<double, 3>& errors, double cap = kDefaultPsnrCap);

// Any built-in metric in its final dB form. Throws for external metrics.
double compute_metric(const MetricId& metric, const PointCloud& reference, const PointCloud& degraded,
                      double cap = kDefaultPsnrCap);

}  // namespace pcqa
