// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include "pcqa/pcio/point_cloud.hpp"

namespace pcqa {

// BT.601 full-range. Y in [0,255], Cb/Cr centred on 128.
std::array<double, 3> rgb_to_ycbcr(const std::array<double, 3>& rgb);
std::array<double, 3> ycbcr_to_rgb(const std::array<double, 3>& ycc);
std::array<double, 3> rgb_to_ycbcr(const Color& c);

// HSL with every component in [0,1]; RGB is on the 0-255 scale.
struct Hsl {
  double h = 0.0;
  double s = 0.0;
  double l = 0.0;
};
Hsl rgb_to_hsl(const std::array<double, 3>& rgb);
std::array<double, 3> hsl_to_rgb(const Hsl& hsl);

}  // namespace pcqa
