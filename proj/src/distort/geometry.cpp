// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include "pcqa/distort/distort.hpp"

namespace pcqa {
namespace {

constexpr double kAnchorSideFraction = 0.3;
constexpr double kLocalOffsetFraction = 0.05;
constexpr std::size_t kMaxAnchors = 16;

double nonzero_diagonal(const PointCloud& cloud) {
  const double diag = bounding_box(cloud).diagonal();
  if (!(diag > 0.0)) throw ValidationError("geometry noise on a zero-extent bounding box");
  return diag;
}

}  // namespace

PointCloud geometry_noise(const PointCloud& cloud, GeometryNoise family, int level, CounterRng& rng) {
  cloud.validate();
  const double diag = nonzero_diagonal(cloud);
  PointCloud out = cloud;
  out.normals.reset();
  switch (family) {
    case GeometryNoise::gaussian_shift: {
      const double sigma = describe_distortion(17).param(level) * diag;
      for (Vec3& p : out.positions) {
        for (int a = 0; a < 3; ++a) p[a] += sigma * rng.normal();
      }
      return out;
    }
    case GeometryNoise::uniform_shift: {
      const auto& d = describe_distortion(18);
      const double range = d.param(level, 1) * diag;
      const auto count = static_cast<std::size_t>(std::llround(d.param(level, 0) * static_cast<double>(cloud.size())));
      for (std::size_t row : sample_without_replacement(cloud.size(), count, rng)) {
        for (int a = 0; a < 3; ++a) out.positions[row][a] += rng.uniform(-range, range);
      }
      return out;
    }
  }
  throw ValidationError("unknown geometry noise family");
}

bool Anchor::contains(const Vec3& p) const {
  return ((p - center).cwiseAbs().array() <= 0.5 * side).all();
}

std::vector<Anchor> select_anchors(const PointCloud& cloud, int level, std::uint64_t seed) {
  cloud.validate();
  const auto total = static_cast<std::size_t>(describe_distortion(19).param(level));
  const double side = kAnchorSideFraction * bounding_box(cloud).max_side();

  // Draw all 16 centres up front in a fixed order; each level takes a prefix.
  CounterRng rng = anchor_rng(seed);
  const std::size_t n = cloud.size();
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  std::vector<std::size_t> centres;
  for (std::size_t i = 0; i < kMaxAnchors; ++i) {
    const std::size_t slot = i % n;
    if (slot == 0 && i > 0) {
      // More anchors than points: start a fresh round of distinct draws.
      for (std::size_t j = 0; j < n; ++j) pool[j] = j;
    }
    std::swap(pool[slot], pool[slot + rng.index(n - slot)]);
    centres.push_back(pool[slot]);
  }

  std::vector<Anchor> anchors;
  for (std::size_t i = 0; i < total; ++i) anchors.push_back(Anchor{cloud.positions[centres[i]], side});
  return anchors;
}

PointCloud local_distortion(const PointCloud& cloud, LocalDistortion family, int level, std::uint64_t seed) {
  const auto anchors = select_anchors(cloud, level, seed);
  auto owner = [&](const Vec3& p) -> int {
    for (std::size_t a = 0; a < anchors.size(); ++a) {
      if (anchors[a].contains(p)) return static_cast<int>(a);
    }
    return -1;
  };

  switch (family) {
    case LocalDistortion::missing: {
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (owner(cloud.positions[i]) < 0) keep.push_back(i);
      }
      if (keep.empty()) throw RuntimeError("local missing: cloud fully deleted");
      PointCloud out = cloud.select(keep);
      out.normals.reset();
      return out;
    }
    case LocalDistortion::offset: {
      const double shift = kLocalOffsetFraction * bounding_box(cloud).max_side();
      PointCloud out = cloud;
      out.normals.reset();
      for (Vec3& p : out.positions) {
        if (owner(p) >= 0) p += Vec3::Constant(shift);
      }
      return out;
    }
    case LocalDistortion::rotation: {
      const double angle = describe_distortion(21).param(level, 1) * std::numbers::pi / 180.0;
      const double cs = std::cos(angle), sn = std::sin(angle);
      std::vector<int> owners(cloud.size());
      std::vector<Vec3> centroid(anchors.size(), Vec3::Zero());
      std::vector<std::size_t> members(anchors.size(), 0);
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        owners[i] = owner(cloud.positions[i]);
        if (owners[i] >= 0) {
          centroid[owners[i]] += cloud.positions[i];
          ++members[owners[i]];
        }
      }
      for (std::size_t a = 0; a < anchors.size(); ++a) {
        if (members[a] > 0) centroid[a] /= static_cast<double>(members[a]);
      }
      PointCloud out = cloud;
      out.normals.reset();
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (owners[i] < 0) continue;
        const Vec3& c = centroid[owners[i]];
        const Vec3 d = cloud.positions[i] - c;
        out.positions[i] = c + Vec3(d.x(), cs * d.y() - sn * d.z(), sn * d.y() + cs * d.z());
      }
      return out;
    }
  }
  throw ValidationError("unknown local distortion family");
}

PointCloud downsample(const PointCloud& cloud, int level, CounterRng& rng) {
  cloud.validate();
  const double removed = describe_distortion(11).param(level);
  const auto keep = static_cast<std::size_t>(std::llround((1.0 - removed) * static_cast<double>(cloud.size())));
  if (keep == 0) throw RuntimeError("downsampling would leave an empty cloud");
  PointCloud out = cloud.select(sample_without_replacement(cloud.size(), keep, rng));
  out.normals.reset();
  return out;
}

PointCloud octree_compress(const PointCloud& cloud, int level) {
  return voxel_compress(cloud, describe_distortion(24).param(level));
}

PointCloud voxel_compress(const PointCloud& cloud, double voxel_side) {
  cloud.validate();
  if (!(voxel_side > 0.0)) throw ValidationError("voxel side must be positive");
  struct Accum {
    std::array<long, 3> color{0, 0, 0};
    long count = 0;
  };
  std::map<std::array<long long, 3>, Accum> voxels;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    std::array<long long, 3> key{};
    for (int a = 0; a < 3; ++a) key[a] = static_cast<long long>(std::floor(cloud.positions[i][a] / voxel_side));
    Accum& acc = voxels[key];
    for (int ch = 0; ch < 3; ++ch) acc.color[ch] += cloud.colors[i][ch];
    ++acc.count;
  }
  PointCloud out;
  out.reserve(voxels.size());
  for (const auto& [key, acc] : voxels) {
    Vec3 centre;
    for (int a = 0; a < 3; ++a) centre[a] = (static_cast<double>(key[a]) + 0.5) * voxel_side;
    Color c{};
    for (int ch = 0; ch < 3; ++ch)
      c[ch] = clamp_channel(std::lround(static_cast<double>(acc.color[ch]) / static_cast<double>(acc.count)));
    out.push_back(centre, c);
  }
  return out;
}

}  // namespace pcqa
