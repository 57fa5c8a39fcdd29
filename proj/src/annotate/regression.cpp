// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/annotate/regression.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pcqa {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sum_squares(RegressionKind kind, std::span<const double> p, std::span<const double> x,
                   std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = eval_regression(kind, p, x[i]) - y[i];
    s += r * r;
  }
  return std::isfinite(s) ? s : kInf;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// Least-squares polynomial of the given degree, coefficients highest first
// and padded to four entries.
std::vector<double> poly_fit(std::span<const double> x, std::span<const double> y, int degree) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd a(n, degree + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double v = 1.0;
    for (int d = degree; d >= 0; --d) {
      a(i, d) = v;
      v *= x[static_cast<std::size_t>(i)];
    }
    b(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  std::vector<double> out(static_cast<std::size_t>(3 - degree), 0.0);
  for (int d = 0; d <= degree; ++d) out.push_back(c(d));
  return out;
}

struct Start {
  std::vector<double> params;
  std::vector<double> steps;
};

std::vector<Start> initial_points(RegressionKind kind, std::span<const double> x, std::span<const double> y) {
  std::vector<double> xs(x.begin(), x.end());
  std::sort(xs.begin(), xs.end());
  const double ymin = *std::min_element(y.begin(), y.end());
  const double ymax = *std::max_element(y.begin(), y.end());
  const double yrange = std::max(ymax - ymin, 1e-6);
  const double xrange = std::max(xs.back() - xs.front(), 1e-6);
  const auto lin = poly_fit(x, y, 1);  // {0,0,slope,intercept}
  const double slope = lin[2], intercept = lin[3];
  const double sign = slope >= 0.0 ? 1.0 : -1.0;

  std::vector<Start> starts;
  switch (kind) {
    case RegressionKind::logistic4: {
      // b1/b2 at the target range endpoints (oriented by the trend), b3 at
      // data quantiles, two width scales.
      const double hi = sign > 0 ? ymax : ymin, lo = sign > 0 ? ymin : ymax;
      for (double q : {0.2, 0.4, 0.6, 0.8}) {
        for (double w : {0.1, 0.3}) {
          const double b4 = w * xrange;
          starts.push_back({{hi, lo, quantile_sorted(xs, q), b4},
                            {0.1 * yrange, 0.1 * yrange, 0.1 * xrange, 0.5 * b4}});
        }
      }
      break;
    }
    case RegressionKind::logistic5: {
      // Linear start: the sigmoid term off, the trend carried by b4/b5.
      const double k = 4.0 / xrange;
      starts.push_back({{0.0, sign * k, quantile_sorted(xs, 0.5), slope, intercept},
                        {0.1 * yrange, 0.5 * k, 0.1 * xrange, 0.1 * std::abs(slope) + 1e-3, 0.1 * yrange}});
      const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
      for (double q : {0.25, 0.5, 0.75}) {
        for (double s : {sign, -sign}) {
          starts.push_back({{s * yrange, s * k * sign, quantile_sorted(xs, q), 0.0, mean_y},
                            {0.1 * yrange, 0.5 * k, 0.1 * xrange, 0.1 * yrange / xrange, 0.1 * yrange}});
        }
      }
      starts.push_back({{yrange, sign * 2.0 * k, quantile_sorted(xs, 0.5), 0.5 * slope, intercept},
                        {0.1 * yrange, k, 0.1 * xrange, 0.1 * std::abs(slope) + 1e-3, 0.1 * yrange}});
      break;
    }
    case RegressionKind::cubic4: {
      // Closed-form polynomial fits of increasing degree, each refined.
      for (int degree = 3; degree >= 1; --degree) {
        auto c = poly_fit(x, y, degree);
        std::vector<double> steps;
        for (double v : c) steps.push_back(0.05 * std::abs(v) + 1e-4);
        starts.push_back({c, steps});
      }
      const auto c3 = poly_fit(x, y, 3);
      for (double scale : {0.5, 1.5, 0.9, 1.1, 0.0}) {
        std::vector<double> c = c3;
        c[0] *= scale;
        std::vector<double> steps;
        for (double v : c) steps.push_back(0.1 * std::abs(v) + 1e-3);
        starts.push_back({c, steps});
      }
      break;
    }
  }
  return starts;
}

}  // namespace

std::string to_string(RegressionKind kind) {
  switch (kind) {
    case RegressionKind::logistic4: return "logistic4";
    case RegressionKind::logistic5: return "logistic5";
    case RegressionKind::cubic4: return "cubic4";
  }
  return "?";
}

RegressionKind parse_regression_kind(const std::string& name) {
  for (auto k : {RegressionKind::logistic4, RegressionKind::logistic5, RegressionKind::cubic4}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown regression kind '" + name + "'");
}

std::size_t parameter_count(RegressionKind kind) { return kind == RegressionKind::logistic5 ? 5 : 4; }

void RegressionModel::validate() const {
  if (params.size() != parameter_count(kind))
    throw ValidationError(to_string(kind) + " needs " + std::to_string(parameter_count(kind)) + " parameters");
  for (double p : params) {
    if (!std::isfinite(p)) throw ValidationError("regression parameter is not finite");
  }
}

double eval_regression(RegressionKind kind, std::span<const double> p, double x) {
  switch (kind) {
    case RegressionKind::logistic4:
      return (p[0] - p[1]) / (1.0 + std::exp(-(x - p[2]) / std::abs(p[3]))) + p[1];
    case RegressionKind::logistic5:
      return p[0] * (0.5 - 1.0 / (1.0 + std::exp(p[1] * (x - p[2])))) + p[3] * x + p[4];
    case RegressionKind::cubic4:
      return ((p[0] * x + p[1]) * x + p[2]) * x + p[3];
  }
  return 0.0;
}

double eval_regression(const RegressionModel& model, double x) {
  return eval_regression(model.kind, model.params, x);
}

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                          std::span<const double> steps, int max_iterations) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += steps[i];
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  SimplexResult result;
  int it = 0;
  for (; it < max_iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j)
        spread = std::max(spread, std::abs(simplex[i][j] - simplex[best][j]) / (1.0 + std::abs(simplex[best][j])));
    }
    if (std::abs(fv[worst] - fv[best]) <= 1e-15 * (1.0 + std::abs(fv[best])) && spread <= 1e-10) {
      result.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);
    }
    auto along = [&](double t, std::vector<double>& out) {
      for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (simplex[worst][j] - centroid[j]);
      return f(out);
    };

    const double fr = along(-1.0, trial);
    if (fr < fv[best]) {
      const double fe = along(-2.0, trial2);
      if (fe < fr) {
        simplex[worst] = trial2;
        fv[worst] = fe;
      } else {
        simplex[worst] = trial;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = trial;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    const double fc = along(outside ? -0.5 : 0.5, trial2);
    if (fc < (outside ? fr : fv[worst])) {
      simplex[worst] = trial2;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
      fv[i] = f(simplex[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  result.x = simplex[best];
  result.value = fv[best];
  result.iterations = it;
  return result;
}

RegressionModel fit_regression(RegressionKind kind, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("regression inputs differ in length");
  if (x.size() < parameter_count(kind))
    throw ValidationError(to_string(kind) + " needs at least " + std::to_string(parameter_count(kind)) + " samples");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw ValidationError("regression input is not finite");
  }
  const auto objective = [&](std::span<const double> p) { return sum_squares(kind, p, x, y); };

  RegressionModel best{kind, {}, kInf, 0, false};
  double best_ss = kInf;
  for (const Start& start : initial_points(kind, x, y)) {
    // One restart from the first optimum guards against a collapsed simplex.
    SimplexResult r = nelder_mead(objective, start.params, start.steps, kMaxIterationsPerStart);
    int used = r.iterations;
    if (used < kMaxIterationsPerStart) {
      std::vector<double> steps;
      for (std::size_t j = 0; j < r.x.size(); ++j) steps.push_back(0.05 * std::abs(r.x[j]) + 0.1 * start.steps[j]);
      SimplexResult again = nelder_mead(objective, r.x, steps, kMaxIterationsPerStart - used);
      used += again.iterations;
      if (again.value <= r.value) {
        again.iterations = used;
        r = std::move(again);
      } else {
        r.converged = again.converged && r.converged;
      }
    }
    const double start_ss = objective(start.params);
    if (start_ss < r.value) {  // never worse than the starting point
      r.x = start.params;
      r.value = start_ss;
    }
    if (r.value < best_ss) {
      best_ss = r.value;
      best.params = r.x;
      best.iterations = used;
      best.converged = r.converged;
    }
  }
  if (best.params.empty()) throw RuntimeError("regression produced no finite fit");
  best.rmse = std::sqrt(sum_squares(kind, best.params, x, y) / static_cast<double>(x.size()));
  return best;
}

}  // namespace pcqa
