// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/distort/distort.hpp"

namespace pcqa {
namespace {

constexpr std::uint64_t kAnchorStream = 0xa17c5e1d00000000ULL;

PointCloud run_native(const PointCloud& cloud, const DistortionSpec& spec) {
  CounterRng rng = level_rng(spec.seed, spec.level);
  const int level = spec.level;
  switch (spec.distortion_id) {
    case 1: return pointwise_color_noise(cloud, PointwiseNoise::color, level, rng);
    case 2: return pointwise_color_noise(cloud, PointwiseNoise::gaussian_snr, level, rng);
    case 3: return structured_color_noise(cloud, StructuredNoise::high_frequency, level, rng);
    case 4: return color_transform(cloud, ColorTransform::quantization, level, rng);
    case 5: return color_transform(cloud, ColorTransform::mean_shift, level, rng);
    case 6: return color_transform(cloud, ColorTransform::contrast, level, rng);
    case 7: return color_transform(cloud, ColorTransform::saturation, level, rng);
    case 8: return structured_color_noise(cloud, StructuredNoise::correlated, level, rng);
    case 9: return structured_color_noise(cloud, StructuredNoise::multiplicative, level, rng);
    case 10: return color_transform(cloud, ColorTransform::dither_quantization, level, rng);
    case 11: return downsample(cloud, level, rng);
    case 12: return pointwise_color_noise(cloud, PointwiseNoise::salt_pepper, level, rng);
    case 13: return pointwise_color_noise(cloud, PointwiseNoise::rayleigh, level, rng);
    case 14: return pointwise_color_noise(cloud, PointwiseNoise::gamma, level, rng);
    case 15: return pointwise_color_noise(cloud, PointwiseNoise::uniform, level, rng);
    case 16: return pointwise_color_noise(cloud, PointwiseNoise::poisson, level, rng);
    case 17: return geometry_noise(cloud, GeometryNoise::gaussian_shift, level, rng);
    case 18: return geometry_noise(cloud, GeometryNoise::uniform_shift, level, rng);
    case 19: return local_distortion(cloud, LocalDistortion::missing, level, spec.seed);
    case 20: return local_distortion(cloud, LocalDistortion::offset, level, spec.seed);
    case 21: return local_distortion(cloud, LocalDistortion::rotation, level, spec.seed);
    case 22: return color_transform(cloud, ColorTransform::luminance, level, rng);
    case 24: return octree_compress(cloud, level);
    default: break;
  }
  throw ValidationError("distortion id " + std::to_string(spec.distortion_id) + " has no native generator");
}

}  // namespace

CounterRng level_rng(std::uint64_t seed, int level) { return CounterRng(seed, static_cast<std::uint64_t>(level)); }

CounterRng anchor_rng(std::uint64_t seed) { return CounterRng(seed, kAnchorStream); }

PointCloud apply_distortion(const PointCloud& cloud, const DistortionSpec& spec, const AdapterConfig* adapters,
                            Provenance* provenance) {
  spec.validate();
  cloud.validate();
  const auto& d = describe_distortion(spec.distortion_id);
  if (!d.is_native()) {
    if (adapters == nullptr)
      throw AdapterError(AdapterError::Kind::not_configured,
                         "adapter not configured for distortion id " + std::to_string(spec.distortion_id));
    return external_codec(cloud, spec, *adapters, provenance);
  }
  PointCloud out = run_native(cloud, spec);
  if (out.empty()) throw RuntimeError("distortion produced an empty cloud");
  out.validate();
  if (provenance != nullptr) {
    provenance->tool = "native:" + std::string(d.name);
    provenance->params.clear();
    for (std::size_t k = 0; k < d.parameters.size(); ++k)
      provenance->params[std::string(d.parameters[k].name)] = format_parameter(d.param(spec.level, k));
  }
  return out;
}

}  // namespace pcqa
