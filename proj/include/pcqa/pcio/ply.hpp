// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "pcqa/pcio/point_cloud.hpp"

namespace pcqa {

class PlyError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

enum class PlyFormat { ascii, binary_le };

enum class PlyPrecision {
  automatic,  // float32 when every coordinate is exactly representable, else float64
  float32,
  float64,
};

/// Reads the vertex element of an ASCII or binary-little-endian PLY file.
/// Requires x, y, z and red, green, blue (integer-typed) vertex properties;
/// nx, ny, nz are picked up when present. Other properties and elements are
/// skipped.
PointCloud load_ply(const std::filesystem::path& path);

/// Writes the cloud after validating it. With PlyPrecision::automatic and
/// binary_le the round trip is bit-exact for any cloud.
void save_ply(const PointCloud& cloud, const std::filesystem::path& path, PlyFormat format,
              PlyPrecision precision = PlyPrecision::automatic);

}  // namespace pcqa
