// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pcqa/sparsenn/sparse_tensor.hpp"

namespace pcqa {

// For every kernel offset i the (input row, output row) pairs with the input
// at u + i and the output at u, both occupied. Input and output share one
// coordinate set. Pairs are ordered by output row.
struct KernelMap {
  int kernel_size = 3;
  std::vector<std::array<int, 3>> offsets;          // x fastest, (0,0,0) at volume/2
  std::vector<std::vector<std::uint32_t>> in_rows;  // per offset
  std::vector<std::vector<std::uint32_t>> out_rows;

  std::size_t volume() const { return offsets.size(); }
  std::size_t center() const { return offsets.size() / 2; }
  std::size_t pair_count(std::size_t k) const { return in_rows[k].size(); }
};

KernelMap build_kernel_map(const SparseTensor& tensor, int kernel_size = 3);

}  // namespace pcqa
