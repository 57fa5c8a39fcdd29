// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

// Synthetic clouds and scratch directories shared by the test binaries.

#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "pcqa/pcio/point_cloud.hpp"

namespace pcqa::testing {

namespace fs = std::filesystem;

// Random cloud inside [0, extent)^3 with random colors.
inline PointCloud random_cloud(std::size_t n, std::uint32_t seed, double extent = 100.0) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> pos(0.0, extent);
  std::uniform_int_distribution<int> col(0, 255);
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i) c.push_back(Vec3(pos(gen), pos(gen), pos(gen)), {col(gen), col(gen), col(gen)});
  return c;
}

// Integer-grid height field z = round(amp * sin(x/7) * cos(y/5)) with a
// smooth color ramp; `pattern` changes the colors.
inline PointCloud surface_cloud(int side, int pattern = 0, double amp = 4.0) {
  PointCloud c;
  for (int x = 0; x < side; ++x) {
    for (int y = 0; y < side; ++y) {
      const double z = std::round(amp * std::sin(x / 7.0) * std::cos(y / 5.0));
      const int r = (x * 255 / std::max(1, side - 1) + 37 * pattern) % 256;
      const int g = (y * 255 / std::max(1, side - 1) + 91 * pattern) % 256;
      const int b = static_cast<int>(127.5 + 127.5 * std::sin((x + y + 3 * pattern) / 4.0));
      c.push_back(Vec3(x, y, z), {r, g, b});
    }
  }
  return c;
}

inline PointCloud constant_cloud(std::size_t n, Color color, std::uint32_t seed = 1) {
  PointCloud c = random_cloud(n, seed);
  for (auto& col : c.colors) col = color;
  return c;
}

// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name) : path_(fs::temp_directory_path() / ("pcqa_test_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  fs::path path_;
};

}  // namespace pcqa::testing
