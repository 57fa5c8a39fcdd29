// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/annotate/pseudo_mos.hpp"

#include <algorithm>
#include <cmath>

namespace pcqa {

void LabelScale::validate() const {
  if (!(min < max)) throw ValidationError("label scale needs min < max");
}

std::vector<AnnotationRecord> generate_pseudo_mos(const std::map<int, TypeFit>& fits,
                                                  const std::vector<Stimulus>& stimuli, const ScoreTable& scores,
                                                  const LabelScale& scale) {
  scale.validate();
  std::vector<AnnotationRecord> out;
  out.reserve(stimuli.size());
  for (const auto& s : stimuli) {
    const auto fit = fits.find(s.distortion_id);
    if (fit == fits.end())
      throw ValidationError("sample " + s.degraded_id + ": distortion type " + std::to_string(s.distortion_id) +
                            " has no fitted model");
    const auto row = scores.find(s.degraded_id);
    const bool has_score = row != scores.end() && row->second.contains(fit->second.metric);
    if (!has_score) throw ValidationError("sample " + s.degraded_id + ": no " + fit->second.metric.name() + " score");
    const double mapped = eval_regression(fit->second.model, row->second.at(fit->second.metric));
    AnnotationRecord r{s.degraded_id, s.distortion_id, s.level, std::clamp(mapped, scale.min, scale.max),
                       fit->second.metric, s.mos};
    if (std::isnan(mapped)) r.pseudo_mos = scale.min;
    out.push_back(std::move(r));
  }
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ValidationError("quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ErrorStats annotation_error_stats(const std::vector<double>& errors) {
  if (errors.size() < 2) throw ValidationError("annotation error statistics need at least 2 labeled records");
  ErrorStats st;
  st.count = errors.size();
  const double n = static_cast<double>(errors.size());
  for (double e : errors) st.mean += e;
  st.mean /= n;
  double var = 0.0;
  for (double e : errors) var += (e - st.mean) * (e - st.mean);
  st.stddev = std::sqrt(var / n);
  std::vector<double> abs_err;
  for (double e : errors) abs_err.push_back(std::abs(e));
  st.q95 = quantile(abs_err, 0.95);
  for (double e : errors) {
    if (e < -kHistogramLimit) {
      ++st.underflow;
    } else if (e > kHistogramLimit) {
      ++st.overflow;
    } else {
      auto bin = static_cast<std::size_t>(std::floor((e + kHistogramLimit) / kHistogramBin));
      ++st.histogram[std::min(bin, kHistogramBins - 1)];
    }
  }
  return st;
}

ErrorStats annotation_error_stats(const std::vector<AnnotationRecord>& records) {
  std::vector<double> errors;
  for (const auto& r : records) {
    if (auto e = r.annotation_error()) errors.push_back(*e);
  }
  return annotation_error_stats(errors);
}

}  // namespace pcqa
