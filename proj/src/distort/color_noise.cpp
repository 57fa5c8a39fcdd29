// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

// Additive and structured noise on the color channels. Every generator
// rounds and crops its result to [0,255] and leaves positions untouched.

#include <cmath>
#include <random>

#include "pcqa/distort/distort.hpp"
#include "pcqa/pcio/kdtree.hpp"

namespace pcqa {
namespace {

constexpr std::size_t kNoiseNeighbors = 8;

std::size_t fraction_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

template <typename Fn>
PointCloud add_per_channel(const PointCloud& cloud, Fn&& draw) {
  PointCloud out = cloud;
  for (Color& c : out.colors) {
    for (int& ch : c) ch = crop_channel(ch + draw());
  }
  return out;
}

// Mean over each point's kNoiseNeighbors nearest neighbours (itself included).
std::vector<std::array<double, 3>> neighbour_mean(const PointCloud& cloud,
                                                  const std::vector<std::array<double, 3>>& values) {
  if (cloud.size() < kNoiseNeighbors + 1)
    throw ValidationError("neighbour-based color noise needs at least 9 points");
  const KdTree tree(cloud);
  std::vector<std::array<double, 3>> out(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    std::array<double, 3> acc{0.0, 0.0, 0.0};
    for (const Neighbor& n : tree.k_nearest(cloud.positions[i], kNoiseNeighbors)) {
      for (int ch = 0; ch < 3; ++ch) acc[ch] += values[n.id][ch];
    }
    for (int ch = 0; ch < 3; ++ch) out[i][ch] = acc[ch] / static_cast<double>(kNoiseNeighbors);
  }
  return out;
}

}  // namespace

double snr_noise_sigma(const PointCloud& cloud, double snr_db) {
  double power = 0.0;
  for (const Color& c : cloud.colors) {
    for (int ch : c) power += static_cast<double>(ch) * ch;
  }
  power /= 3.0 * static_cast<double>(cloud.size());
  return std::sqrt(power / std::pow(10.0, snr_db / 10.0));
}

std::vector<std::array<double, 3>> gaussian_snr_noise(const PointCloud& cloud, int level, CounterRng& rng) {
  const double sigma = snr_noise_sigma(cloud, describe_distortion(2).param(level));
  std::vector<std::array<double, 3>> noise(cloud.size());
  for (auto& n : noise) {
    for (double& v : n) v = sigma * rng.normal();
  }
  return noise;
}

PointCloud pointwise_color_noise(const PointCloud& cloud, PointwiseNoise family, int level, CounterRng& rng) {
  cloud.validate();
  switch (family) {
    case PointwiseNoise::color: {
      const auto& d = describe_distortion(1);
      const double amp = d.param(level, 1);
      PointCloud out = cloud;
      for (std::size_t row : sample_without_replacement(cloud.size(), fraction_count(d.param(level, 0), cloud.size()), rng)) {
        const double offset = rng.uniform(-amp, amp);  // same offset on R, G and B
        for (int& ch : out.colors[row]) ch = crop_channel(ch + offset);
      }
      return out;
    }
    case PointwiseNoise::gaussian_snr: {
      const auto noise = gaussian_snr_noise(cloud, level, rng);
      PointCloud out = cloud;
      for (std::size_t i = 0; i < out.size(); ++i) {
        for (int ch = 0; ch < 3; ++ch) out.colors[i][ch] = crop_channel(out.colors[i][ch] + noise[i][ch]);
      }
      return out;
    }
    case PointwiseNoise::salt_pepper: {
      const double fraction = describe_distortion(12).param(level);
      PointCloud out = cloud;
      for (std::size_t row : sample_without_replacement(cloud.size(), fraction_count(fraction, cloud.size()), rng)) {
        const int v = rng.uniform() < 0.5 ? 0 : 255;
        out.colors[row] = {v, v, v};
      }
      return out;
    }
    case PointwiseNoise::rayleigh: {
      const double scale = describe_distortion(13).param(level);
      return add_per_channel(cloud, [&] { return scale * std::sqrt(-2.0 * std::log1p(-rng.uniform())); });
    }
    case PointwiseNoise::gamma: {
      // Sum of three exponential variates with rate a.
      const double rate = describe_distortion(14).param(level);
      return add_per_channel(cloud, [&] {
        double e = 0.0;
        for (int i = 0; i < 3; ++i) e += -std::log1p(-rng.uniform()) / rate;
        return e;
      });
    }
    case PointwiseNoise::uniform: {
      const double amp = describe_distortion(15).param(level);
      return add_per_channel(cloud, [&] { return rng.uniform(-amp, amp); });
    }
    case PointwiseNoise::poisson: {
      std::poisson_distribution<int> poisson(describe_distortion(16).param(level));
      return add_per_channel(cloud, [&] { return static_cast<double>(poisson(rng)); });
    }
  }
  throw ValidationError("unknown pointwise noise family");
}

PointCloud structured_color_noise(const PointCloud& cloud, StructuredNoise family, int level, CounterRng& rng) {
  cloud.validate();
  switch (family) {
    case StructuredNoise::high_frequency: {
      // Split into a k-NN low-pass and its residual, perturb the residual.
      const double sigma = std::sqrt(describe_distortion(3).param(level)) * 255.0;
      std::vector<std::array<double, 3>> values(cloud.size());
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        for (int ch = 0; ch < 3; ++ch) values[i][ch] = cloud.colors[i][ch];
      }
      const auto low = neighbour_mean(cloud, values);
      PointCloud out = cloud;
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        for (int ch = 0; ch < 3; ++ch) {
          const double residual = values[i][ch] - low[i][ch] + sigma * rng.normal();
          out.colors[i][ch] = crop_channel(low[i][ch] + residual);
        }
      }
      return out;
    }
    case StructuredNoise::correlated: {
      const double sigma = describe_distortion(8).param(level);
      std::vector<std::array<double, 3>> white(cloud.size());
      for (auto& w : white) {
        for (double& v : w) v = sigma * rng.normal();
      }
      auto smooth = neighbour_mean(cloud, white);
      // Averaging shrinks the spread; rescale each channel back to sigma.
      for (int ch = 0; ch < 3; ++ch) {
        double mean = 0.0, sq = 0.0;
        for (const auto& s : smooth) mean += s[ch];
        mean /= static_cast<double>(smooth.size());
        for (const auto& s : smooth) sq += (s[ch] - mean) * (s[ch] - mean);
        const double sd = std::sqrt(sq / static_cast<double>(smooth.size()));
        if (sd > 0.0) {
          for (auto& s : smooth) s[ch] *= sigma / sd;
        }
      }
      PointCloud out = cloud;
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        for (int ch = 0; ch < 3; ++ch) out.colors[i][ch] = crop_channel(out.colors[i][ch] + smooth[i][ch]);
      }
      return out;
    }
    case StructuredNoise::multiplicative: {
      const double sigma = std::sqrt(describe_distortion(9).param(level));
      PointCloud out = cloud;
      for (Color& c : out.colors) {
        for (int& ch : c) ch = crop_channel(ch * (1.0 + sigma * rng.normal()));
      }
      return out;
    }
  }
  throw ValidationError("unknown structured noise family");
}

}  // namespace pcqa
