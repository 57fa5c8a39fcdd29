// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

// Straight-line reference implementations. They share no code with the
// library beyond the PointCloud container.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "pcqa/pcio/point_cloud.hpp"

namespace pcqa::oracle {

// Index of the nearest point by exhaustive scan, lowest index on ties.
inline std::size_t nearest(const std::vector<Vec3>& pts, const Vec3& q) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = (pts[i] - q).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

inline double pool(const std::vector<double>& e, bool hausdorff) {
  if (hausdorff) return *std::max_element(e.begin(), e.end());
  long double s = 0;
  for (double v : e) s += v;
  return static_cast<double>(s / e.size());
}

inline double p2point(const PointCloud& ref, const PointCloud& deg, bool hausdorff) {
  std::vector<double> e;
  for (const Vec3& p : deg.positions) e.push_back((p - ref.positions[nearest(ref.positions, p)]).squaredNorm());
  return pool(e, hausdorff);
}

inline double p2plane(const PointCloud& ref, const std::vector<Vec3>& normals, const PointCloud& deg,
                      bool hausdorff) {
  std::vector<double> e;
  for (const Vec3& p : deg.positions) {
    const std::size_t j = nearest(ref.positions, p);
    const double d = (p - ref.positions[j]).dot(normals[j]);
    e.push_back(d * d);
  }
  return pool(e, hausdorff);
}

inline std::array<double, 3> ycbcr(const Color& c) {
  const double r = c[0], g = c[1], b = c[2];
  return {0.299 * r + 0.587 * g + 0.114 * b, 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b,
          128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b};
}

inline std::array<double, 3> yuv_errors(const PointCloud& ref, const PointCloud& deg, bool hausdorff) {
  std::array<std::vector<double>, 3> e;
  for (std::size_t i = 0; i < deg.size(); ++i) {
    const auto a = ycbcr(deg.colors[i]);
    const auto b = ycbcr(ref.colors[nearest(ref.positions, deg.positions[i])]);
    for (int c = 0; c < 3; ++c) e[c].push_back((a[c] - b[c]) * (a[c] - b[c]));
  }
  return {pool(e[0], hausdorff), pool(e[1], hausdorff), pool(e[2], hausdorff)};
}

inline double psnr(double error, double peak, double cap = 100.0) {
  if (error < peak * peak * 1e-10) return cap;
  return 10.0 * std::log10(peak * peak / error);
}

inline double diagonal(const PointCloud& c) {
  Vec3 lo = c.positions[0], hi = c.positions[0];
  for (const auto& p : c.positions) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

inline double psnr_yuv(const PointCloud& a, const PointCloud& b, bool hausdorff) {
  const auto f = yuv_errors(a, b, hausdorff);
  const auto r = yuv_errors(b, a, hausdorff);
  double out = 0.0;
  for (int c = 0; c < 3; ++c) out += (c == 0 ? 6.0 : 1.0) * psnr(std::max(f[c], r[c]), 255.0);
  return out / 8.0;
}

// Pearson correlation in long double, two-pass.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

// Average ranks by counting: 1 + #smaller + (#equal - 1) / 2.
inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t less = 0, equal = 0;
    for (double w : v) {
      less += w < v[i];
      equal += w == v[i];
    }
    r[i] = 1.0 + static_cast<double>(less) + 0.5 * static_cast<double>(equal - 1);
  }
  return r;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(ranks(x), ranks(y));
}

// How far `deg` is from `ref`: symmetric mean nearest-neighbour position
// error over the reference diagonal plus mean color error over 255.
inline double severity(const PointCloud& ref, const PointCloud& deg) {
  const double diag = diagonal(ref);
  auto one_way = [&](const PointCloud& a, const PointCloud& b) {
    long double geo = 0, col = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::size_t j = nearest(b.positions, a.positions[i]);
      geo += (a.positions[i] - b.positions[j]).norm();
      for (int c = 0; c < 3; ++c) col += std::abs(a.colors[i][c] - b.colors[j][c]);
    }
    return static_cast<double>(geo / a.size() / diag + col / (3.0 * a.size()) / 255.0);
  };
  return 0.5 * (one_way(ref, deg) + one_way(deg, ref));
}

}  // namespace pcqa::oracle
