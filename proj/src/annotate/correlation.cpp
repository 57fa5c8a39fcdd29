// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/annotate/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pcqa {
namespace {

void check_pair(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw ValidationError("correlation of vectors with lengths " + std::to_string(p.size()) + " and " +
                          std::to_string(q.size()));
  if (p.size() < 2) throw ValidationError("correlation needs at least two samples");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || !std::isfinite(q[i])) throw ValidationError("correlation of non-finite values");
  }
}

}  // namespace

double plcc(std::span<const double> p, std::span<const double> q) {
  check_pair(p, q);
  const double n = static_cast<double>(p.size());
  const double pm = std::accumulate(p.begin(), p.end(), 0.0) / n;
  const double qm = std::accumulate(q.begin(), q.end(), 0.0) / n;
  double spq = 0.0, spp = 0.0, sqq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double dp = p[i] - pm, dq = q[i] - qm;
    spq += dp * dq;
    spp += dp * dp;
    sqq += dq * dq;
  }
  if (spp == 0.0 || sqq == 0.0) throw UndefinedCorrelation();
  // One rounding in the denominator; on tie-free ranks spp == sqq and the
  // root is exact, which keeps this bit-identical to the closed form.
  double denom = std::sqrt(spp * sqq);
  if (!std::isfinite(denom) || denom == 0.0) denom = std::sqrt(spp) * std::sqrt(sqq);
  return std::clamp(spq / denom, -1.0, 1.0);
}

std::vector<double> fractional_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double srocc(std::span<const double> p, std::span<const double> q) {
  check_pair(p, q);
  const auto rp = fractional_ranks(p);
  const auto rq = fractional_ranks(q);
  return plcc(rp, rq);
}

double srocc_closed_form(std::span<const double> p, std::span<const double> q) {
  check_pair(p, q);
  for (auto v : {p, q}) {
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError("closed-form SROCC requires distinct values");
  }
  const auto rp = fractional_ranks(p);
  const auto rq = fractional_ranks(q);
  const double n = static_cast<double>(p.size());
  double d2 = 0.0;
  for (std::size_t i = 0; i < rp.size(); ++i) d2 += (rp[i] - rq[i]) * (rp[i] - rq[i]);
  // Integer numerator and denominator, then a single rounding.
  const double denom = n * (n * n - 1.0);
  return (denom - 6.0 * d2) / denom;
}

}  // namespace pcqa
