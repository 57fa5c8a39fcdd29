// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "pcqa/error.hpp"

namespace pcqa {

// Raised when either input has zero variance (or is all ties for ranks).
class UndefinedCorrelation : public ValidationError {
 public:
  UndefinedCorrelation() : ValidationError("undefined correlation") {}
};

double plcc(std::span<const double> p, std::span<const double> q);

// Ranks starting at 1; tied values share the average of their positions.
std::vector<double> fractional_ranks(std::span<const double> v);

// Pearson correlation of fractional ranks.
double srocc(std::span<const double> p, std::span<const double> q);

// 1 - 6 sum d^2 / (L (L^2 - 1)). Only valid without ties; throws otherwise.
double srocc_closed_form(std::span<const double> p, std::span<const double> q);

}  // namespace pcqa
