// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <vector>

namespace pcqa {

// Runs fn(0..n-1) on up to `jobs` threads. Results come back in index order,
// so output does not depend on scheduling. An exception thrown by fn(i) is
// stored in slot i rather than propagated.
template <typename T>
struct JobResult {
  std::optional<T> value;
  std::exception_ptr error;
};

// fn must not throw.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

template <typename T>
std::vector<JobResult<T>> parallel_map(std::size_t n, int jobs, const std::function<T(std::size_t)>& fn) {
  std::vector<JobResult<T>> out(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    try {
      out[i].value = fn(i);
    } catch (...) {
      out[i].error = std::current_exception();
    }
  });
  return out;
}

}  // namespace pcqa
