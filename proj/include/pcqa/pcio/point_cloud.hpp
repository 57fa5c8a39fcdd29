// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "pcqa/error.hpp"

namespace pcqa {

using Vec3 = Eigen::Vector3d;

// R, G, B in [0, 255]. Stored as int so that out-of-range values produced by
// buggy callers are caught by validate() instead of silently wrapping.
using Color = std::array<int, 3>;

class InvalidCloud : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Positions, colors and optional unit normals, row-aligned.
struct PointCloud {
  std::vector<Vec3> positions;
  std::vector<Color> colors;
  std::optional<std::vector<Vec3>> normals;

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }
  bool has_normals() const { return normals.has_value(); }

  void reserve(std::size_t n);
  void push_back(const Vec3& p, const Color& c);

  // Throws InvalidCloud if N == 0, rows are misaligned, a color component
  // leaves [0,255], a position is non-finite or a normal is not unit length.
  void validate() const;

  // Row subset in the given order. Normals are carried along when present.
  PointCloud select(const std::vector<std::size_t>& rows) const;

  friend bool operator==(const PointCloud&, const PointCloud&) = default;
};

struct BoundingBox {
  Vec3 min_corner = Vec3::Zero();
  Vec3 max_corner = Vec3::Zero();

  Vec3 sides() const { return max_corner - min_corner; }
  double max_side() const { return sides().maxCoeff(); }
  double diagonal() const { return sides().norm(); }
  bool contains(const Vec3& p) const;
};

BoundingBox bounding_box(const PointCloud& cloud);

inline int clamp_channel(long v) { return v < 0 ? 0 : (v > 255 ? 255 : static_cast<int>(v)); }

// Crop then round to the nearest integer channel value.
int crop_channel(double v);

}  // namespace pcqa
