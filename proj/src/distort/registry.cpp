// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/distort/registry.hpp"

#include <charconv>

namespace pcqa {
namespace {

using P = LevelParameter;
constexpr std::array<double, kLevelCount> kSevenSteps{10, 20, 30, 40, 50, 60, 70};
constexpr std::array<double, kLevelCount> kFractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
constexpr std::array<double, kLevelCount> kAnchorTotals{1, 2, 4, 6, 9, 12, 16};
constexpr std::array<double, kLevelCount> kRemoved{0.15, 0.30, 0.45, 0.60, 0.70, 0.80, 0.90};
constexpr std::array<double, kLevelCount> kAttrQp{27, 31, 35, 39, 43, 47, 51};
constexpr std::array<double, kLevelCount> kAvsAttr{8, 16, 24, 32, 40, 44, 48};

std::vector<DistortionDescriptor> make_registry() {
  using C = Category;
  std::vector<DistortionDescriptor> r = {
      {1, "color_noise", C::photometric, false, true, {P{"fraction", kFractions}, P{"amplitude", kSevenSteps}}},
      {2, "gaussian_noise", C::photometric, false, true, {P{"snr_db", {13, 11, 9, 7, 5, 3, 1}}}},
      {3, "high_frequency_noise", C::photometric, false, true,
       {P{"variance", {0.001, 0.003, 0.005, 0.0075, 0.01, 0.03, 0.05}}}},
      {4, "quantization_noise", C::photometric, false, true, {P{"step", {27, 33, 39, 47, 55, 65, 76}}}},
      {5, "mean_shift", C::photometric, false, true, {P{"offset", kSevenSteps}}},
      {6, "contrast_change", C::photometric, false, true, {P{"gamma", {1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7}}}},
      {7, "saturation_change", C::photometric, false, true,
       {P{"increment", {-0.10, -0.25, -0.40, -0.55, -0.70, -0.85, -1.00}}}},
      {8, "correlated_noise", C::photometric, false, true, {P{"sigma", kSevenSteps}}},
      {9, "multiplicative_noise", C::photometric, false, true,
       {P{"variance", {1e-4, 3e-4, 5.5e-4, 8e-4, 10.5e-4, 13e-4, 15.5e-4}}}},
      {10, "dither_quantization", C::photometric, false, true, {P{"colors", {24, 16, 12, 8, 6, 4, 2}}}},
      {11, "downsampling", C::geometric, true, false, {P{"removed_fraction", kRemoved}}},
      {12, "salt_pepper_noise", C::photometric, false, true,
       {P{"fraction", {0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.30}}}},
      {13, "rayleigh_noise", C::photometric, false, true, {P{"scale", kSevenSteps}}},
      {14, "gamma_noise", C::photometric, false, true, {P{"rate", {0.1, 0.08, 0.07, 0.06, 0.05, 0.04, 0.03}}}},
      {15, "uniform_noise", C::photometric, false, true, {P{"amplitude", kSevenSteps}}},
      {16, "poisson_noise", C::photometric, false, true, {P{"mean", kSevenSteps}}},
      {17, "gaussian_geometry_shift", C::geometric, true, false,
       {P{"sigma_fraction", {0.001, 0.0025, 0.004, 0.0055, 0.007, 0.0085, 0.01}}}},
      {18, "uniform_geometry_shift", C::geometric, true, false,
       {P{"fraction", kFractions}, P{"range_fraction", {0.005, 0.01, 0.02, 0.03, 0.04, 0.05, 0.07}}}},
      {19, "local_missing", C::local, true, false, {P{"anchors", kAnchorTotals}}},
      {20, "local_offset", C::local, true, false, {P{"anchors", kAnchorTotals}}},
      {21, "local_rotation", C::local, true, false,
       {P{"anchors", kAnchorTotals}, P{"degrees", {20, 25, 30, 35, 40, 45, 50}}}},
      {22, "luminance_shift", C::photometric, false, true, {P{"offset", {20, 50, 70, 90, 110, 130, 150}}}},
      {23, "poisson_reconstruction", C::external, true, true, {P{"downsample_fraction", kRemoved}}},
      {24, "octree_compression", C::compression, true, true, {P{"resolution", {8, 10, 12, 14, 16, 18, 20}}}},
      {25, "gpcc_lossless_geom_lossy_attr", C::external, false, true, {P{"qp", kAttrQp}}},
      {26, "gpcc_lossless_geom_nearlossless_attr", C::external, false, true,
       {P{"qp", {10, 16, 22, 28, 34, 40, 46}}}},
      {27, "gpcc_lossy_geom_lossy_attr", C::external, true, true,
       {P{"positionQuantizationScale", {0.9375, 0.875, 0.75, 0.5, 0.25, 0.125, 0.0625}}, P{"qp", kAttrQp}}},
      {28, "vpcc_lossy_geom_lossy_attr", C::external, true, true,
       {P{"geometryQP", {16, 20, 24, 28, 32, 36, 40}}, P{"textureQP", {22, 27, 32, 37, 42, 47, 51}}}},
      {29, "avs_limitlossy_geom_lossy_attr", C::external, true, true,
       {P{"geom_quant_step", {1.14286, 1.33333, 2, 4, 8, 12, 16}}, P{"attr_quant_param", kAvsAttr}}},
      {30, "avs_lossless_geom_limitlossy_attr", C::external, false, true, {P{"attr_quant_param", kAvsAttr}}},
      {31, "avs_lossless_geom_lossy_attr", C::external, false, true, {P{"attr_quant_param", kAvsAttr}}},
  };
  return r;
}

}  // namespace

std::string_view to_string(Category c) {
  switch (c) {
    case Category::photometric: return "photometric";
    case Category::geometric: return "geometric";
    case Category::local: return "local";
    case Category::compression: return "compression";
    case Category::external: return "external";
  }
  return "unknown";
}

void DistortionSpec::validate() const {
  if (distortion_id < 1 || distortion_id > kDistortionCount)
    throw ValidationError("distortion id " + std::to_string(distortion_id) + " outside 1..31");
  if (level < 1 || level > kLevelCount)
    throw ValidationError("distortion level " + std::to_string(level) + " outside 1..7");
}

double DistortionDescriptor::param(int level, std::size_t which) const {
  if (level < 1 || level > kLevelCount) throw ValidationError("distortion level outside 1..7");
  return parameters.at(which).values[static_cast<std::size_t>(level - 1)];
}

std::span<const DistortionDescriptor> distortion_registry() {
  static const std::vector<DistortionDescriptor> registry = make_registry();
  return registry;
}

const DistortionDescriptor& describe_distortion(int id) {
  if (id < 1 || id > kDistortionCount)
    throw ValidationError("distortion id " + std::to_string(id) + " outside 1..31");
  return distortion_registry()[static_cast<std::size_t>(id - 1)];
}

std::vector<int> native_distortion_ids() {
  std::vector<int> ids;
  for (const auto& d : distortion_registry()) {
    if (d.is_native()) ids.push_back(d.id);
  }
  return ids;
}

std::string format_parameter(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace pcqa
