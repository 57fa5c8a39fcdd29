// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "pcqa/app/manifest.hpp"
#include "pcqa/pcio/ply.hpp"
#include "support/fixtures.hpp"

namespace pcqa::testing {

// References r0, r1, ... with distinct relief and colors.
inline void write_references(const fs::path& dir, int count, int side) {
  fs::create_directories(dir);
  for (int i = 0; i < count; ++i)
    save_ply(surface_cloud(side, i, 3.0 + i), dir / ("r" + std::to_string(i) + ".ply"), PlyFormat::binary_le);
}

// Hidden monotone quality curve, falling from 3.8 at level 1 to 2.2 at
// level 7 with a type-dependent bend. The band stays clear of the scale
// ends so that clipped ratings do not flatten a rater's distribution.
inline double planted_quality(int distortion_id, int level) {
  const double bend = 0.7 + 0.2 * (distortion_id % 5);
  return 3.8 - 1.6 * std::pow((level - 1) / 6.0, bend);
}

struct PlantedRatings {
  std::map<std::string, double> planted;  // per sample, before subject noise
};

// Each subject scores planted + Laplace noise, clipped to [1, 5]. The
// heavy-tailed noise keeps per-subject kurtosis inside the screening band.
inline PlantedRatings write_ratings(const Manifest& manifest, const fs::path& path, std::uint32_t seed,
                                    int subjects = 24, double noise_scale = 0.4) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> jitter(0.0, 0.05);
  std::exponential_distribution<double> expo(1.0 / noise_scale);
  PlantedRatings out;
  std::ofstream csv(path);
  csv << "stimulus_id,subject_id,score\n";
  for (const auto& r : manifest.records) {
    if (!r.ok()) continue;
    const double q = std::clamp(planted_quality(r.distortion_id, r.level) + jitter(gen), 1.0, 5.0);
    out.planted[r.sample_id] = q;
    for (int s = 0; s < subjects; ++s) {
      const double score = std::clamp(q + expo(gen) - expo(gen), 1.0, 5.0);
      csv << r.sample_id << ",subject" << s << ',' << score << '\n';
    }
  }
  return out;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace pcqa::testing
