// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/distort/color_space.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

namespace pcqa {

namespace {

const Eigen::Matrix3d& forward_matrix() {
  static const Eigen::Matrix3d m = (Eigen::Matrix3d() << 0.299, 0.587, 0.114,  //
                                    -0.168736, -0.331264, 0.5,                 //
                                    0.5, -0.418688, -0.081312)
                                       .finished();
  return m;
}

// Exact inverse of the rounded forward coefficients, so conversions round-trip.
const Eigen::Matrix3d& inverse_matrix() {
  static const Eigen::Matrix3d m = forward_matrix().inverse();
  return m;
}

}  // namespace

std::array<double, 3> rgb_to_ycbcr(const std::array<double, 3>& rgb) {
  const auto [r, g, b] = rgb;
  return {0.299 * r + 0.587 * g + 0.114 * b,
          128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b,
          128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b};
}

std::array<double, 3> ycbcr_to_rgb(const std::array<double, 3>& ycc) {
  const Eigen::Vector3d rgb = inverse_matrix() * Eigen::Vector3d(ycc[0], ycc[1] - 128.0, ycc[2] - 128.0);
  return {rgb[0], rgb[1], rgb[2]};
}

std::array<double, 3> rgb_to_ycbcr(const Color& c) {
  return rgb_to_ycbcr(std::array<double, 3>{static_cast<double>(c[0]), static_cast<double>(c[1]),
                                            static_cast<double>(c[2])});
}

Hsl rgb_to_hsl(const std::array<double, 3>& rgb) {
  const double r = rgb[0] / 255.0, g = rgb[1] / 255.0, b = rgb[2] / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  Hsl out;
  out.l = 0.5 * (mx + mn);
  const double d = mx - mn;
  if (d <= 0.0) return out;  // achromatic
  out.s = out.l > 0.5 ? d / (2.0 - mx - mn) : d / (mx + mn);
  double h;
  if (mx == r) {
    h = (g - b) / d + (g < b ? 6.0 : 0.0);
  } else if (mx == g) {
    h = (b - r) / d + 2.0;
  } else {
    h = (r - g) / d + 4.0;
  }
  out.h = h / 6.0;
  return out;
}

namespace {

double hue_to_channel(double p, double q, double t) {
  if (t < 0.0) t += 1.0;
  if (t > 1.0) t -= 1.0;
  if (t < 1.0 / 6.0) return p + (q - p) * 6.0 * t;
  if (t < 0.5) return q;
  if (t < 2.0 / 3.0) return p + (q - p) * (2.0 / 3.0 - t) * 6.0;
  return p;
}

}  // namespace

std::array<double, 3> hsl_to_rgb(const Hsl& hsl) {
  if (hsl.s <= 0.0) {
    const double v = hsl.l * 255.0;
    return {v, v, v};
  }
  const double q = hsl.l < 0.5 ? hsl.l * (1.0 + hsl.s) : hsl.l + hsl.s - hsl.l * hsl.s;
  const double p = 2.0 * hsl.l - q;
  return {255.0 * hue_to_channel(p, q, hsl.h + 1.0 / 3.0), 255.0 * hue_to_channel(p, q, hsl.h),
          255.0 * hue_to_channel(p, q, hsl.h - 1.0 / 3.0)};
}

}  // namespace pcqa
