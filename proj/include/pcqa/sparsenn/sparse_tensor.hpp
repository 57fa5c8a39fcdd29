// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pcqa/pcio/point_cloud.hpp"

namespace pcqa {

using Coord4 = std::array<std::int32_t, 4>;  // x, y, z, batch
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Coord4Hash {
  std::size_t operator()(const Coord4& c) const noexcept;
};

// Coordinate list plus one feature row per coordinate, indexed by a hash map.
class SparseTensor {
 public:
  SparseTensor() = default;
  // Throws ValidationError on duplicate coordinates, a row-count mismatch or
  // an empty coordinate list.
  SparseTensor(std::vector<Coord4> coords, FeatureMatrix feats);

  std::size_t size() const { return coords_.size(); }
  const std::vector<Coord4>& coords() const { return coords_; }
  const FeatureMatrix& feats() const { return feats_; }
  FeatureMatrix& feats() { return feats_; }

  std::optional<std::size_t> find(const Coord4& c) const;

  // Same tensor with rows reordered: row i of the result is row order[i].
  SparseTensor permuted(const std::vector<std::size_t>& order) const;

 private:
  std::vector<Coord4> coords_;
  FeatureMatrix feats_;
  std::unordered_map<Coord4, std::uint32_t, Coord4Hash> index_;
};

// floor(position / voxel) coordinates, batch 0, features RGB/255 - 0.5.
// Points sharing a voxel are merged with their mean feature; rows come out
// in lexicographic coordinate order.
SparseTensor voxelize(const PointCloud& cloud, double voxel_size = 1.0);

}  // namespace pcqa
