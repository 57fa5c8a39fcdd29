// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pcqa/pcio/point_cloud.hpp"

namespace pcqa {

struct Neighbor {
  std::size_t id = 0;
  double sq_dist = 0.0;

  // Distance first, then point id. Every query result is sorted by this.
  friend bool operator<(const Neighbor& a, const Neighbor& b) {
    return a.sq_dist < b.sq_dist || (a.sq_dist == b.sq_dist && a.id < b.id);
  }
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Balanced k-d tree over a fixed set of positions. The tree copies the
// positions, so it stays valid after the source cloud goes away. Immutable
// after construction; concurrent queries are safe.
class KdTree {
 public:
  explicit KdTree(std::span<const Vec3> points);
  explicit KdTree(const PointCloud& cloud) : KdTree(std::span<const Vec3>(cloud.positions)) {}

  std::size_t size() const { return points_.size(); }
  const Vec3& point(std::size_t id) const { return points_[id]; }

  // The k closest points, ties broken by lower id. Throws ValidationError
  // unless 1 <= k <= size().
  std::vector<Neighbor> k_nearest(const Vec3& query, std::size_t k) const;

  Neighbor nearest(const Vec3& query) const;

 private:
  struct Node {
    std::uint32_t begin = 0;  // range into order_
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    int axis = -1;  // -1 for leaves
    double split = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::int32_t node, const Vec3& q, std::size_t k, std::vector<Neighbor>& heap) const;

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

// Linear scan with the same ordering contract as KdTree::k_nearest.
std::vector<Neighbor> brute_force_k_nearest(std::span<const Vec3> points, const Vec3& query,
                                            std::size_t k);

}  // namespace pcqa
