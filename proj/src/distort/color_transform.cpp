// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "pcqa/distort/color_space.hpp"
#include "pcqa/distort/distort.hpp"

namespace pcqa {
namespace {

constexpr int kKMeansIterations = 50;

std::array<double, 3> as_real(const Color& c) {
  return {static_cast<double>(c[0]), static_cast<double>(c[1]), static_cast<double>(c[2])};
}

double sq_dist(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

std::size_t nearest_index(const std::vector<std::array<double, 3>>& palette, const std::array<double, 3>& v) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < palette.size(); ++k) {
    const double d = sq_dist(palette[k], v);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

// k-means++ seeding followed by Lloyd iterations.
std::vector<std::array<double, 3>> kmeans_palette(const PointCloud& cloud, std::size_t k, CounterRng& rng) {
  const std::set<Color> unique(cloud.colors.begin(), cloud.colors.end());
  if (unique.size() <= k) {
    std::vector<std::array<double, 3>> palette;
    for (const Color& c : unique) palette.push_back(as_real(c));
    return palette;
  }
  std::vector<std::array<double, 3>> points;
  points.reserve(cloud.size());
  for (const Color& c : cloud.colors) points.push_back(as_real(c));

  std::vector<std::array<double, 3>> palette{points[rng.index(points.size())]};
  std::vector<double> d2(points.size());
  while (palette.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      d2[i] = sq_dist(points[i], palette[nearest_index(palette, points[i])]);
      total += d2[i];
    }
    double target = rng.uniform() * total;
    std::size_t pick = points.size() - 1;
    for (std::size_t i = 0; i < points.size(); ++i) {
      target -= d2[i];
      if (target < 0.0 && d2[i] > 0.0) {
        pick = i;
        break;
      }
    }
    palette.push_back(points[pick]);
  }

  std::vector<std::size_t> assign(points.size(), 0);
  for (int iter = 0; iter < kKMeansIterations; ++iter) {
    bool changed = iter == 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::size_t a = nearest_index(palette, points[i]);
      if (a != assign[i]) changed = true;
      assign[i] = a;
    }
    if (!changed) break;
    std::vector<std::array<double, 3>> sum(k, {0.0, 0.0, 0.0});
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (int ch = 0; ch < 3; ++ch) sum[assign[i]][ch] += points[i][ch];
      ++count[assign[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] == 0) continue;  // empty cluster keeps its previous centre
      for (int ch = 0; ch < 3; ++ch) palette[c][ch] = sum[c][ch] / static_cast<double>(count[c]);
    }
  }
  return palette;
}

// Mean distance from each palette entry to its closest other entry.
double mean_palette_spacing(const std::vector<std::array<double, 3>>& palette) {
  if (palette.size() < 2) return 0.0;
  double total = 0.0;
  for (std::size_t a = 0; a < palette.size(); ++a) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < palette.size(); ++b) {
      if (a != b) best = std::min(best, sq_dist(palette[a], palette[b]));
    }
    total += std::sqrt(best);
  }
  return total / static_cast<double>(palette.size());
}

}  // namespace

PointCloud color_transform(const PointCloud& cloud, ColorTransform family, int level, CounterRng& rng) {
  cloud.validate();
  PointCloud out = cloud;
  switch (family) {
    case ColorTransform::quantization: {
      // Bin centre of width-q bins; integer division keeps the centre integral.
      const int q = static_cast<int>(describe_distortion(4).param(level));
      for (Color& c : out.colors) {
        for (int& ch : c) ch = clamp_channel((ch / q) * q + q / 2);
      }
      return out;
    }
    case ColorTransform::mean_shift: {
      const double offset = describe_distortion(5).param(level);
      for (Color& c : out.colors) {
        for (int& ch : c) ch = crop_channel(ch + offset);
      }
      return out;
    }
    case ColorTransform::contrast: {
      const double gamma = describe_distortion(6).param(level);
      for (Color& c : out.colors) {
        for (int& ch : c) ch = crop_channel(255.0 * std::pow(ch / 255.0, gamma));
      }
      return out;
    }
    case ColorTransform::saturation: {
      const double increment = describe_distortion(7).param(level);
      for (Color& c : out.colors) {
        Hsl hsl = rgb_to_hsl(as_real(c));
        hsl.s = std::clamp(hsl.s * (1.0 + increment), 0.0, 1.0);
        const auto rgb = hsl_to_rgb(hsl);
        for (int ch = 0; ch < 3; ++ch) c[ch] = crop_channel(rgb[ch]);
      }
      return out;
    }
    case ColorTransform::dither_quantization: {
      const auto colors = static_cast<std::size_t>(describe_distortion(10).param(level));
      const auto palette = kmeans_palette(cloud, colors, rng);
      const double half = 0.5 * mean_palette_spacing(palette);
      for (Color& c : out.colors) {
        auto v = as_real(c);
        for (double& ch : v) ch += rng.uniform(-half, half);
        const auto& chosen = palette[nearest_index(palette, v)];
        for (int ch = 0; ch < 3; ++ch) c[ch] = crop_channel(chosen[ch]);
      }
      return out;
    }
    case ColorTransform::luminance: {
      const double offset = describe_distortion(22).param(level);
      for (Color& c : out.colors) {
        auto ycc = rgb_to_ycbcr(c);
        ycc[0] += offset;
        const auto rgb = ycbcr_to_rgb(ycc);
        for (int ch = 0; ch < 3; ++ch) c[ch] = crop_channel(rgb[ch]);
      }
      return out;
    }
  }
  throw ValidationError("unknown color transform family");
}

}  // namespace pcqa
