// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pcqa/error.hpp"

namespace pcqa {

struct Rating {
  std::string stimulus;
  std::string subject;
  double score = 0.0;
};

// Sparse subject x stimulus score table on the five-grade scale.
struct RatingMatrix {
  std::vector<Rating> ratings;

  void add(std::string stimulus, std::string subject, double score);
  void validate() const;  // scores in [1,5]

  std::set<std::string> stimuli() const;
  std::map<std::string, std::vector<double>> scores_by_subject() const;

  // CSV with header stimulus_id,subject_id,score.
  static RatingMatrix read_csv(std::istream& in);
  static RatingMatrix read_csv(const std::filesystem::path& path);
};

// m4 / m2^2 over the values; empty when the variance is zero.
std::optional<double> kurtosis_beta2(std::span<const double> scores);

struct SubjectVerdict {
  std::string subject;
  std::optional<double> beta2;
  bool kept = false;
  std::string reason;  // "kept", "beta2 out of [2,4]" or "degenerate"
};

struct ScreeningResult {
  std::vector<std::string> kept;
  std::vector<std::string> rejected;
  std::vector<SubjectVerdict> verdicts;  // one per subject, sorted by id
};

// Keeps a subject iff 2 <= beta2 <= 4. Each subject needs at least 4 scores.
ScreeningResult screen_subjects(const RatingMatrix& ratings);

inline constexpr std::size_t kDefaultMinScores = 16;

struct MosResult {
  std::map<std::string, double> mos;
  std::map<std::string, std::size_t> counts;
  std::vector<std::string> warnings;  // stimuli below the minimum count
};

// Mean of the scores from kept subjects. Throws if a stimulus loses all of
// its scores; falling short of `min_scores` only produces a warning.
MosResult compute_mos(const RatingMatrix& ratings, const std::vector<std::string>& kept_subjects,
                      std::size_t min_scores = kDefaultMinScores);

}  // namespace pcqa
