// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/sparsenn/kernel_map.hpp"

namespace pcqa {

KernelMap build_kernel_map(const SparseTensor& tensor, int kernel_size) {
  if (kernel_size < 1 || kernel_size % 2 == 0) throw ValidationError("kernel size must be odd and positive");
  const int r = kernel_size / 2;
  KernelMap map;
  map.kernel_size = kernel_size;
  for (int dz = -r; dz <= r; ++dz) {
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) map.offsets.push_back({dx, dy, dz});
    }
  }
  map.in_rows.resize(map.offsets.size());
  map.out_rows.resize(map.offsets.size());
  const auto& coords = tensor.coords();
  for (std::size_t k = 0; k < map.offsets.size(); ++k) {
    const auto& o = map.offsets[k];
    if (o[0] == 0 && o[1] == 0 && o[2] == 0) {
      for (std::uint32_t u = 0; u < coords.size(); ++u) {
        map.in_rows[k].push_back(u);
        map.out_rows[k].push_back(u);
      }
      continue;
    }
    for (std::uint32_t u = 0; u < coords.size(); ++u) {
      const Coord4& c = coords[u];
      if (const auto in = tensor.find({c[0] + o[0], c[1] + o[1], c[2] + o[2], c[3]})) {
        map.in_rows[k].push_back(static_cast<std::uint32_t>(*in));
        map.out_rows[k].push_back(u);
      }
    }
  }
  return map;
}

}  // namespace pcqa
