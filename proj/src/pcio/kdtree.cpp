// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/pcio/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace pcqa {
namespace {

constexpr std::uint32_t kLeafSize = 8;

}  // namespace

KdTree::KdTree(std::span<const Vec3> points) : points_(points.begin(), points.end()) {
  if (points_.size() >= std::numeric_limits<std::uint32_t>::max())
    throw ValidationError("k-d tree: too many points");
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / kLeafSize + 1);
    build(0, static_cast<std::uint32_t>(points_.size()));
  }
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto index = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kLeafSize) return index;

  Vec3 lo = points_[order_[begin]];
  Vec3 hi = lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  if (hi[axis] == lo[axis]) return index;  // all coincident: keep as one leaf

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double pa = points_[a][axis], pb = points_[b][axis];
                     return pa < pb || (pa == pb && a < b);
                   });
  const double split = points_[order_[mid]][axis];
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  Node& node = nodes_[index];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return index;
}

void KdTree::search(std::int32_t index, const Vec3& q, std::size_t k, std::vector<Neighbor>& heap) const {
  const Node& node = nodes_[index];
  if (node.axis < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const std::uint32_t id = order_[i];
      const Neighbor cand{id, (points_[id] - q).squaredNorm()};
      if (heap.size() < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end());
      } else if (cand < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    return;
  }
  // Left subtree holds coordinates <= split, right holds >= split.
  const double delta = q[node.axis] - node.split;
  const std::int32_t near = delta <= 0.0 ? node.left : node.right;
  const std::int32_t far = delta <= 0.0 ? node.right : node.left;
  search(near, q, k, heap);
  // Equal distances must still be visited: a lower id may be waiting there.
  if (heap.size() < k || delta * delta <= heap.front().sq_dist) search(far, q, k, heap);
}

std::vector<Neighbor> KdTree::k_nearest(const Vec3& query, std::size_t k) const {
  if (k < 1 || k > points_.size())
    throw ValidationError("k_nearest: k=" + std::to_string(k) + " outside [1, " +
                          std::to_string(points_.size()) + "]");
  std::vector<Neighbor> heap;
  heap.reserve(k);
  search(0, query, k, heap);
  std::sort_heap(heap.begin(), heap.end());
  return heap;
}

Neighbor KdTree::nearest(const Vec3& query) const { return k_nearest(query, 1).front(); }

std::vector<Neighbor> brute_force_k_nearest(std::span<const Vec3> points, const Vec3& query,
                                            std::size_t k) {
  if (k < 1 || k > points.size()) throw ValidationError("brute_force_k_nearest: k out of range");
  std::vector<Neighbor> all(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) all[i] = {i, (points[i] - query).squaredNorm()};
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
  all.resize(k);
  return all;
}

}  // namespace pcqa
