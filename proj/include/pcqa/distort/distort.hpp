// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pcqa/distort/external.hpp"
#include "pcqa/distort/registry.hpp"
#include "pcqa/distort/rng.hpp"
#include "pcqa/pcio/point_cloud.hpp"

namespace pcqa {

// What produced a degraded cloud; embedded in dataset manifests.
struct Provenance {
  std::string tool;
  std::map<std::string, std::string> params;
};

// Degrades `cloud` as prescribed by `spec`. Deterministic in (cloud, spec).
// External ids need `adapters`; everything else runs in-process.
PointCloud apply_distortion(const PointCloud& cloud, const DistortionSpec& spec,
                            const AdapterConfig* adapters = nullptr, Provenance* provenance = nullptr);

// Stream ids used to key the per-job generator. Level-keyed streams give every
// level its own draws; the anchor stream ignores the level so that anchor
// sets nest across levels.
CounterRng level_rng(std::uint64_t seed, int level);
CounterRng anchor_rng(std::uint64_t seed);

enum class PointwiseNoise { color, gaussian_snr, salt_pepper, rayleigh, gamma, uniform, poisson };
PointCloud pointwise_color_noise(const PointCloud& cloud, PointwiseNoise family, int level, CounterRng& rng);

// Standard deviation that gives the requested signal-to-noise ratio against
// the mean squared channel value of `cloud`.
double snr_noise_sigma(const PointCloud& cloud, double snr_db);

// The raw N x 3 Gaussian field that pointwise_color_noise(gaussian_snr)
// adds before rounding and cropping. Consumes `rng` identically.
std::vector<std::array<double, 3>> gaussian_snr_noise(const PointCloud& cloud, int level, CounterRng& rng);

enum class StructuredNoise { high_frequency, correlated, multiplicative };
PointCloud structured_color_noise(const PointCloud& cloud, StructuredNoise family, int level, CounterRng& rng);

enum class ColorTransform { quantization, mean_shift, contrast, saturation, dither_quantization, luminance };
// Only dither_quantization draws from `rng`.
PointCloud color_transform(const PointCloud& cloud, ColorTransform family, int level, CounterRng& rng);

enum class GeometryNoise { gaussian_shift, uniform_shift };
PointCloud geometry_noise(const PointCloud& cloud, GeometryNoise family, int level, CounterRng& rng);

struct Anchor {
  Vec3 center;
  double side = 0.0;
  bool contains(const Vec3& p) const;
};

// Anchor cubes for a local distortion at `level`. The set for level L is a
// prefix of the set for level L+1 under the same seed.
std::vector<Anchor> select_anchors(const PointCloud& cloud, int level, std::uint64_t seed);

enum class LocalDistortion { missing, offset, rotation };
PointCloud local_distortion(const PointCloud& cloud, LocalDistortion family, int level, std::uint64_t seed);

PointCloud downsample(const PointCloud& cloud, int level, CounterRng& rng);

PointCloud octree_compress(const PointCloud& cloud, int level);
PointCloud voxel_compress(const PointCloud& cloud, double voxel_side);

}  // namespace pcqa
