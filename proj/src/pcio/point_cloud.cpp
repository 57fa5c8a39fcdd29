// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/pcio/point_cloud.hpp"

#include <cmath>
#include <string>

namespace pcqa {

void PointCloud::reserve(std::size_t n) {
  positions.reserve(n);
  colors.reserve(n);
}

void PointCloud::push_back(const Vec3& p, const Color& c) {
  positions.push_back(p);
  colors.push_back(c);
}

void PointCloud::validate() const {
  if (positions.empty()) throw InvalidCloud("point cloud is empty");
  if (colors.size() != positions.size())
    throw InvalidCloud("positions and colors differ in row count (" +
                       std::to_string(positions.size()) + " vs " +
                       std::to_string(colors.size()) + ")");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!positions[i].allFinite())
      throw InvalidCloud("non-finite position at row " + std::to_string(i));
    for (int c : colors[i]) {
      if (c < 0 || c > 255)
        throw InvalidCloud("color component " + std::to_string(c) + " out of [0,255] at row " +
                           std::to_string(i));
    }
  }
  if (normals) {
    if (normals->size() != positions.size())
      throw InvalidCloud("normals and positions differ in row count");
    for (std::size_t i = 0; i < normals->size(); ++i) {
      if (std::abs((*normals)[i].norm() - 1.0) > 1e-6)
        throw InvalidCloud("normal at row " + std::to_string(i) + " is not unit length");
    }
  }
}

PointCloud PointCloud::select(const std::vector<std::size_t>& rows) const {
  PointCloud out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(positions[r], colors[r]);
  if (normals) {
    out.normals.emplace();
    out.normals->reserve(rows.size());
    for (std::size_t r : rows) out.normals->push_back((*normals)[r]);
  }
  return out;
}

bool BoundingBox::contains(const Vec3& p) const {
  return (p.array() >= min_corner.array()).all() && (p.array() <= max_corner.array()).all();
}

BoundingBox bounding_box(const PointCloud& cloud) {
  if (cloud.empty()) throw InvalidCloud("bounding box of an empty cloud");
  BoundingBox box{cloud.positions.front(), cloud.positions.front()};
  for (const Vec3& p : cloud.positions) {
    box.min_corner = box.min_corner.cwiseMin(p);
    box.max_corner = box.max_corner.cwiseMax(p);
  }
  return box;
}

int crop_channel(double v) {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  if (v >= 255.0) return 255;
  return static_cast<int>(std::lround(v));
}

}  // namespace pcqa
