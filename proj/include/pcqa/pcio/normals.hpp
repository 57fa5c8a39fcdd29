// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pcqa/pcio/kdtree.hpp"
#include "pcqa/pcio/point_cloud.hpp"

namespace pcqa {

inline constexpr std::size_t kDefaultNormalNeighbors = 12;

struct NormalEstimate {
  PointCloud cloud;                    // input cloud with normals filled in
  std::vector<std::uint8_t> degenerate;  // 1 where the neighborhood had no plane
  std::size_t degenerate_count = 0;
};

// PCA plane fit over the k nearest neighbors (the point itself included).
// The normal is the eigenvector of the smallest covariance eigenvalue, oriented
// away from the neighborhood centroid. Collinear or coincident neighborhoods
// get (0,0,1) and are flagged. Requires 3 <= k <= N.
NormalEstimate estimate_normals(const PointCloud& cloud, std::size_t k = kDefaultNormalNeighbors);
NormalEstimate estimate_normals(const PointCloud& cloud, const KdTree& index, std::size_t k);

}  // namespace pcqa
