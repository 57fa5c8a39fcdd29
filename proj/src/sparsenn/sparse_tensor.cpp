// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/sparsenn/sparse_tensor.hpp"

#include <cmath>
#include <map>
#include <string>

#include "pcqa/distort/rng.hpp"

namespace pcqa {

std::size_t Coord4Hash::operator()(const Coord4& c) const noexcept {
  std::uint64_t h = 0;
  for (std::int32_t v : c) h = mix64(h ^ static_cast<std::uint32_t>(v));
  return static_cast<std::size_t>(h);
}

SparseTensor::SparseTensor(std::vector<Coord4> coords, FeatureMatrix feats)
    : coords_(std::move(coords)), feats_(std::move(feats)) {
  if (coords_.empty()) throw ValidationError("sparse tensor needs at least one coordinate");
  if (static_cast<std::size_t>(feats_.rows()) != coords_.size())
    throw ValidationError("sparse tensor: " + std::to_string(coords_.size()) + " coordinates but " +
                          std::to_string(feats_.rows()) + " feature rows");
  index_.reserve(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!index_.emplace(coords_[i], static_cast<std::uint32_t>(i)).second)
      throw ValidationError("sparse tensor: duplicate coordinate");
  }
}

std::optional<std::size_t> SparseTensor::find(const Coord4& c) const {
  const auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseTensor SparseTensor::permuted(const std::vector<std::size_t>& order) const {
  std::vector<Coord4> coords;
  FeatureMatrix feats(feats_.rows(), feats_.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    coords.push_back(coords_[order[i]]);
    feats.row(static_cast<Eigen::Index>(i)) = feats_.row(static_cast<Eigen::Index>(order[i]));
  }
  return SparseTensor(std::move(coords), std::move(feats));
}

SparseTensor voxelize(const PointCloud& cloud, double voxel_size) {
  if (!(voxel_size > 0.0)) throw ValidationError("voxel size must be positive");
  cloud.validate();
  struct Accum {
    std::array<double, 3> sum{0.0, 0.0, 0.0};
    int count = 0;
  };
  std::map<Coord4, Accum> voxels;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    Coord4 c{0, 0, 0, 0};
    for (int a = 0; a < 3; ++a) {
      const double v = std::floor(cloud.positions[i][a] / voxel_size);
      if (std::abs(v) > 1e9) throw ValidationError("voxel coordinate out of range; increase the voxel size");
      c[a] = static_cast<std::int32_t>(v);
    }
    Accum& acc = voxels[c];
    for (int ch = 0; ch < 3; ++ch) acc.sum[ch] += cloud.colors[i][ch] / 255.0 - 0.5;
    ++acc.count;
  }
  std::vector<Coord4> coords;
  coords.reserve(voxels.size());
  FeatureMatrix feats(static_cast<Eigen::Index>(voxels.size()), 3);
  Eigen::Index row = 0;
  for (const auto& [c, acc] : voxels) {
    coords.push_back(c);
    for (int ch = 0; ch < 3; ++ch) feats(row, ch) = acc.sum[ch] / acc.count;
    ++row;
  }
  return SparseTensor(std::move(coords), std::move(feats));
}

}  // namespace pcqa
