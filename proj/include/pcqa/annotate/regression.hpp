// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pcqa/error.hpp"

namespace pcqa {

enum class RegressionKind { logistic4, logistic5, cubic4 };

std::string to_string(RegressionKind kind);
RegressionKind parse_regression_kind(const std::string& name);
std::size_t parameter_count(RegressionKind kind);

// logistic4: (b1 - b2) / (1 + exp(-(x - b3) / |b4|)) + b2
// logistic5: b1 (1/2 - 1 / (1 + exp(b2 (x - b3)))) + b4 x + b5
// cubic4:    a x^3 + b x^2 + c x + d
struct RegressionModel {
  RegressionKind kind = RegressionKind::logistic5;
  std::vector<double> params;
  double rmse = 0.0;
  int iterations = 0;
  bool converged = false;

  void validate() const;
};

double eval_regression(RegressionKind kind, std::span<const double> params, double x);
double eval_regression(const RegressionModel& model, double x);

inline constexpr int kRegressionStarts = 8;
inline constexpr int kMaxIterationsPerStart = 10000;

// Least-squares fit from 8 deterministic starts refined by Nelder-Mead;
// keeps the start with the lowest RMSE.
RegressionModel fit_regression(RegressionKind kind, std::span<const double> x, std::span<const double> y);

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Nelder-Mead minimization starting from the simplex {x0, x0 + step_i e_i}.
SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                          std::span<const double> steps, int max_iterations);

}  // namespace pcqa
