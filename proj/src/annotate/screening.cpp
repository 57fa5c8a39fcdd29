// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/annotate/screening.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pcqa {

void RatingMatrix::add(std::string stimulus, std::string subject, double score) {
  ratings.push_back(Rating{std::move(stimulus), std::move(subject), score});
}

void RatingMatrix::validate() const {
  for (const auto& r : ratings) {
    if (!(r.score >= 1.0 && r.score <= 5.0))
      throw ValidationError("score " + std::to_string(r.score) + " of subject " + r.subject + " outside [1,5]");
    if (r.stimulus.empty() || r.subject.empty()) throw ValidationError("rating with an empty id");
  }
}

std::set<std::string> RatingMatrix::stimuli() const {
  std::set<std::string> out;
  for (const auto& r : ratings) out.insert(r.stimulus);
  return out;
}

std::map<std::string, std::vector<double>> RatingMatrix::scores_by_subject() const {
  std::map<std::string, std::vector<double>> out;
  for (const auto& r : ratings) out[r.subject].push_back(r.score);
  return out;
}

RatingMatrix RatingMatrix::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("subjective score file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "stimulus_id,subject_id,score")
    throw ValidationError("subjective score file: expected header stimulus_id,subject_id,score");
  RatingMatrix m;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string stimulus, subject, value;
    if (!std::getline(ss, stimulus, ',') || !std::getline(ss, subject, ',') || !std::getline(ss, value))
      throw ValidationError("subjective score file line " + std::to_string(line_no) + ": expected 3 fields");
    double score = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), score);
    if (ec != std::errc() || ptr != value.data() + value.size())
      throw ValidationError("subjective score file line " + std::to_string(line_no) + ": bad score '" + value + "'");
    m.add(stimulus, subject, score);
  }
  m.validate();
  return m;
}

RatingMatrix RatingMatrix::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read subjective score file: " + path.string());
  return read_csv(in);
}

std::optional<double> kurtosis_beta2(std::span<const double> scores) {
  if (scores.empty()) return std::nullopt;
  const double n = static_cast<double>(scores.size());
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double s : scores) {
    const double d = (s - mean) * (s - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  if (m2 <= 1e-15 * std::max(1.0, mean * mean)) return std::nullopt;
  return m4 / (m2 * m2);
}

ScreeningResult screen_subjects(const RatingMatrix& ratings) {
  ratings.validate();
  ScreeningResult result;
  for (const auto& [subject, scores] : ratings.scores_by_subject()) {
    if (scores.size() < 4)
      throw ValidationError("subject " + subject + " has " + std::to_string(scores.size()) +
                            " scores; screening needs at least 4");
    SubjectVerdict v{subject, kurtosis_beta2(scores), false, {}};
    if (!v.beta2) {
      v.reason = "degenerate";
    } else if (*v.beta2 >= 2.0 && *v.beta2 <= 4.0) {
      v.kept = true;
      v.reason = "kept";
    } else {
      v.reason = "beta2 out of [2,4]";
    }
    (v.kept ? result.kept : result.rejected).push_back(subject);
    result.verdicts.push_back(std::move(v));
  }
  return result;
}

MosResult compute_mos(const RatingMatrix& ratings, const std::vector<std::string>& kept_subjects,
                      std::size_t min_scores) {
  ratings.validate();
  const std::set<std::string> kept(kept_subjects.begin(), kept_subjects.end());
  std::map<std::string, double> sums;
  MosResult result;
  for (const auto& s : ratings.stimuli()) result.counts[s] = 0;
  for (const auto& r : ratings.ratings) {
    if (!kept.contains(r.subject)) continue;
    sums[r.stimulus] += r.score;
    ++result.counts[r.stimulus];
  }
  for (const auto& [stimulus, count] : result.counts) {
    if (count == 0) throw ValidationError("stimulus " + stimulus + " has no scores left after screening");
    result.mos[stimulus] = sums[stimulus] / static_cast<double>(count);
    if (count < min_scores)
      result.warnings.push_back("stimulus " + stimulus + " has " + std::to_string(count) + " scores (minimum " +
                                std::to_string(min_scores) + ")");
  }
  return result;
}

}  // namespace pcqa
