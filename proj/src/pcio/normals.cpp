// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/pcio/normals.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace pcqa {

NormalEstimate estimate_normals(const PointCloud& cloud, std::size_t k) {
  return estimate_normals(cloud, KdTree(cloud), k);
}

NormalEstimate estimate_normals(const PointCloud& cloud, const KdTree& index, std::size_t k) {
  if (k < 3 || k > cloud.size())
    throw ValidationError("estimate_normals: need 3 <= k <= N (k=" + std::to_string(k) +
                          ", N=" + std::to_string(cloud.size()) + ")");
  NormalEstimate out{cloud, std::vector<std::uint8_t>(cloud.size(), 0), 0};
  std::vector<Vec3> normals(cloud.size());

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto nbrs = index.k_nearest(cloud.positions[i], k);
    Vec3 centroid = Vec3::Zero();
    for (const Neighbor& n : nbrs) centroid += index.point(n.id);
    centroid /= static_cast<double>(nbrs.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const Neighbor& n : nbrs) {
      const Vec3 d = index.point(n.id) - centroid;
      cov += d * d.transpose();
    }
    cov /= static_cast<double>(nbrs.size());

    // Eigenvalues come back in increasing order.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    const Eigen::Vector3d ev = eig.eigenvalues();
    const double scale = ev[2];
    if (!(scale > 0.0) || ev[1] <= 1e-12 * scale) {
      normals[i] = Vec3::UnitZ();
      out.degenerate[i] = 1;
      ++out.degenerate_count;
      continue;
    }
    Vec3 n = eig.eigenvectors().col(0).normalized();
    const double side = n.dot(cloud.positions[i] - centroid);
    if (std::abs(side) > 1e-12 * std::sqrt(scale)) {
      if (side < 0.0) n = -n;
    } else {
      // Point sits on the fitted plane; orient by the dominant component.
      int axis = 0;
      n.cwiseAbs().maxCoeff(&axis);
      if (n[axis] < 0.0) n = -n;
    }
    normals[i] = n;
  }
  out.cloud.normals = std::move(normals);
  return out;
}

}  // namespace pcqa
