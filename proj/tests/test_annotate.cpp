// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "pcqa/annotate/correlation.hpp"
#include "pcqa/annotate/pseudo_mos.hpp"
#include "pcqa/annotate/regression.hpp"
#include "pcqa/annotate/screening.hpp"
#include "pcqa/annotate/selection.hpp"
#include "support/oracles.hpp"

namespace pcqa {
namespace {

using Vec = std::vector<double>;

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

TEST(Plcc, HandValues) {
  const Vec p{1, 2, 3, 4.5};
  EXPECT_NEAR(plcc(p, p), 1.0, 1e-15);
  EXPECT_NEAR(plcc(p, Vec{-1, -2, -3, -4.5}), -1.0, 1e-15);
  EXPECT_NEAR(plcc(Vec{1, 2, 3}, Vec{1, 3, 2}), 0.5, 1e-15);
  EXPECT_EQ(message_of([] { plcc(Vec{1, 1, 1}, Vec{1, 2, 3}); }), "undefined correlation");
  EXPECT_THROW(plcc(Vec{1, 2}, Vec{1, 2, 3}), ValidationError);
  EXPECT_THROW(plcc(Vec{1}, Vec{1}), ValidationError);
}

TEST(Srocc, HandValuesAndInvariance) {
  EXPECT_NEAR(srocc(Vec{1, 2, 3, 4}, Vec{1, 3, 2, 4}), 0.8, 1e-15);
  EXPECT_EQ(srocc_closed_form(Vec{1, 2, 3, 4}, Vec{1, 3, 2, 4}), 0.8);
  EXPECT_NEAR(srocc(Vec{1, 2, 3}, Vec{10, 20, 30}), 1.0, 1e-15);
  EXPECT_EQ(message_of([] { srocc(Vec{2, 2, 2}, Vec{1, 2, 3}); }), "undefined correlation");
  EXPECT_THROW(srocc_closed_form(Vec{1, 1, 2}, Vec{1, 2, 3}), ValidationError);
  std::mt19937 gen(1);
  std::normal_distribution<double> nd;
  Vec p(50), q(50), eq(50);
  for (int i = 0; i < 50; ++i) {
    p[i] = nd(gen);
    q[i] = p[i] + nd(gen);
    eq[i] = std::exp(q[i]);
  }
  EXPECT_EQ(srocc(p, q), srocc(p, eq));
  EXPECT_NEAR(plcc(p, q), plcc(p, [&] {
                Vec a(q);
                for (double& v : a) v = 3.0 * v + 7.0;
                return a;
              }()),
              1e-12);
}

TEST(Srocc, ClosedFormBitIdenticalWithoutTies) {
  std::mt19937 gen(17);
  std::normal_distribution<double> nd;
  for (std::size_t n : {2u, 3u, 10u, 99u, 500u}) {
    Vec p(n), q(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = nd(gen);
      q[i] = p[i] + nd(gen);
    }
    EXPECT_EQ(srocc_closed_form(p, q), srocc(p, q)) << n;
  }
}

TEST(Srocc, FractionalRanks) {
  EXPECT_EQ(fractional_ranks(Vec{10, 20, 20, 5}), (Vec{2, 3.5, 3.5, 1}));
  EXPECT_EQ(fractional_ranks(Vec{1, 1, 1}), (Vec{2, 2, 2}));
}

TEST(Correlation, RandomPairsMatchOracle) {
  std::mt19937 gen(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + gen() % 120;
    Vec p(n), q(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = trial % 2 ? static_cast<double>(gen() % 6) : std::normal_distribution<double>()(gen);
      q[i] = 0.5 * p[i] + std::normal_distribution<double>()(gen);
    }
    if (oracle::ranks(p) == Vec(n, (n + 1) / 2.0)) continue;  // all tied
    EXPECT_NEAR(plcc(p, q), oracle::pearson(p, q), 1e-9);
    EXPECT_NEAR(srocc(p, q), oracle::spearman(p, q), 1e-9);
    EXPECT_EQ(srocc(p, q), plcc(fractional_ranks(p), fractional_ranks(q)));
  }
}

TEST(Screening, KurtosisOracles) {
  const Vec uniform{1, 2, 3, 4, 5, 1, 2, 3, 4, 5};
  EXPECT_NEAR(*kurtosis_beta2(uniform), 1.7, 1e-12);
  EXPECT_FALSE(kurtosis_beta2(Vec{3, 3, 3, 3}).has_value());
}

RatingMatrix three_subjects() {
  RatingMatrix m;
  // Discrete uniform: beta2 = 1.7.
  for (int rep = 0; rep < 4; ++rep) {
    for (int s = 1; s <= 5; ++s) m.add("s" + std::to_string(rep * 5 + s), "uniform", s);
  }
  // Peaked around 3 with rare tails: beta2 close to 3.
  const Vec peaked{3, 3, 3, 3, 3, 3, 3, 3, 2, 4, 2, 4, 2, 4, 1, 5, 3, 3, 2, 4};
  for (std::size_t i = 0; i < peaked.size(); ++i) m.add("s" + std::to_string(i + 1), "gauss", peaked[i]);
  for (int i = 1; i <= 20; ++i) m.add("s" + std::to_string(i), "flat", 4);
  return m;
}

TEST(Screening, UniformRejectedGaussianKeptConstantDegenerate) {
  const RatingMatrix m = three_subjects();
  const Vec peaked{3, 3, 3, 3, 3, 3, 3, 3, 2, 4, 2, 4, 2, 4, 1, 5, 3, 3, 2, 4};
  const double b2 = *kurtosis_beta2(peaked);
  ASSERT_GE(b2, 2.0);
  ASSERT_LE(b2, 4.0);
  for (int run = 0; run < 2; ++run) {
    const auto r = screen_subjects(m);
    EXPECT_EQ(r.kept, (std::vector<std::string>{"gauss"}));
    EXPECT_EQ(r.rejected, (std::vector<std::string>{"flat", "uniform"}));
    ASSERT_EQ(r.verdicts.size(), 3u);
    EXPECT_EQ(r.verdicts[0].subject, "flat");
    EXPECT_EQ(r.verdicts[0].reason, "degenerate");
    EXPECT_EQ(r.verdicts[2].reason, "beta2 out of [2,4]");
    EXPECT_NEAR(*r.verdicts[2].beta2, 1.7, 1e-12);
  }
}

TEST(Screening, NeedsFourScoresPerSubject) {
  RatingMatrix m;
  for (int i = 0; i < 3; ++i) m.add("s" + std::to_string(i), "a", 3);
  EXPECT_THROW(screen_subjects(m), ValidationError);
}

TEST(Mos, MeansAndWarnings) {
  RatingMatrix m;
  for (auto [subject, score] : {std::pair{"a", 3.0}, {"b", 4.0}, {"c", 5.0}}) m.add("x", subject, score);
  m.add("y", "a", 2.0);
  const auto r = compute_mos(m, {"a", "b", "c"}, 2);
  EXPECT_EQ(r.mos.at("x"), 4.0);
  EXPECT_EQ(r.mos.at("y"), 2.0);
  EXPECT_EQ(r.counts.at("y"), 1u);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("y"), std::string::npos);
  EXPECT_THROW(compute_mos(m, {"b", "c"}, 1), ValidationError);
}

TEST(Mos, SpreadsheetOracle) {
  RatingMatrix m;
  std::mt19937 gen(5);
  std::map<std::string, std::pair<double, int>> sums;
  for (int s = 0; s < 10; ++s) {
    for (int subj = 0; subj < 12; ++subj) {
      if (gen() % 4 == 0) continue;
      const double score = 1 + gen() % 5;
      m.add("stim" + std::to_string(s), "p" + std::to_string(subj), score);
      sums["stim" + std::to_string(s)].first += score;
      sums["stim" + std::to_string(s)].second += 1;
    }
  }
  std::vector<std::string> all;
  for (int subj = 0; subj < 12; ++subj) all.push_back("p" + std::to_string(subj));
  const auto r = compute_mos(m, all, 1);
  ASSERT_EQ(r.mos.size(), 10u);
  for (const auto& [id, acc] : sums) EXPECT_NEAR(r.mos.at(id), acc.first / acc.second, 1e-12);
}

TEST(RatingMatrix, CsvAndValidation) {
  std::istringstream good("stimulus_id,subject_id,score\nx,a,3\nx,b,4.5\n");
  const auto m = RatingMatrix::read_csv(good);
  EXPECT_EQ(m.ratings.size(), 2u);
  std::istringstream bad_header("stimulus,subject,score\nx,a,3\n");
  EXPECT_THROW(RatingMatrix::read_csv(bad_header), ValidationError);
  std::istringstream out_of_range("stimulus_id,subject_id,score\nx,a,6\n");
  EXPECT_THROW(RatingMatrix::read_csv(out_of_range).validate(), ValidationError);
  EXPECT_THROW(RatingMatrix::read_csv(std::filesystem::path("/nonexistent/ratings.csv")), ValidationError);
}

TEST(Regression, ClosedForms) {
  EXPECT_DOUBLE_EQ(eval_regression(RegressionKind::logistic5, Vec{0, 1, 0, 1, 0}, 3.7), 3.7);
  EXPECT_DOUBLE_EQ(eval_regression(RegressionKind::logistic5, Vec{0, 2, 1, 0, 4.2}, -9.0), 4.2);
  EXPECT_DOUBLE_EQ(eval_regression(RegressionKind::cubic4, Vec{0, 0, 2, 1}, 3.0), 7.0);
  const double x = 0.3;
  EXPECT_NEAR(eval_regression(RegressionKind::logistic4, Vec{5, 1, 0.5, 0.2}, x),
              (5.0 - 1.0) / (1.0 + std::exp(-(x - 0.5) / 0.2)) + 1.0, 1e-15);
  EXPECT_NEAR(eval_regression(RegressionKind::logistic5, Vec{2, 3, 1, 0.5, 0.1}, x),
              2.0 * (0.5 - 1.0 / (1.0 + std::exp(3.0 * (x - 1.0)))) + 0.5 * x + 0.1, 1e-15);
  EXPECT_EQ(parameter_count(RegressionKind::logistic4), 4u);
  EXPECT_EQ(parameter_count(RegressionKind::logistic5), 5u);
  EXPECT_EQ(parse_regression_kind(to_string(RegressionKind::cubic4)), RegressionKind::cubic4);
  EXPECT_THROW(parse_regression_kind("quadratic"), ValidationError);
}

double curve_rmse(const RegressionModel& m, const Vec& x, const Vec& truth) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(eval_regression(m, x[i]) - truth[i], 2);
  return std::sqrt(s / x.size());
}

TEST(Regression, CubicRecoversCoefficients) {
  Vec x, y;
  for (int i = 0; i < 40; ++i) {
    x.push_back(-2.0 + 0.1 * i);
    y.push_back(0.5 * std::pow(x.back(), 3) - 1.2 * x.back() * x.back() + 0.3 * x.back() + 2.0);
  }
  const auto m = fit_regression(RegressionKind::cubic4, x, y);
  const Vec expected{0.5, -1.2, 0.3, 2.0};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(m.params[k], expected[k], 1e-6);
}

TEST(Regression, Logistic5RepresentsIdentity) {
  Vec x;
  for (int i = 0; i < 30; ++i) x.push_back(1.0 + 4.0 * i / 29.0);
  const auto m = fit_regression(RegressionKind::logistic5, x, x);
  EXPECT_LE(m.rmse, 1e-6);
}

TEST(Regression, Logistic4NoisyRecovery) {
  std::mt19937 gen(8);
  std::normal_distribution<double> noise(0.0, 0.01);
  const Vec truth_params{4.8, 1.2, 30.0, 4.0};
  Vec x, y, truth;
  for (int i = 0; i < 50; ++i) {
    x.push_back(10.0 + 40.0 * i / 49.0);
    truth.push_back(eval_regression(RegressionKind::logistic4, truth_params, x.back()));
    y.push_back(truth.back() + noise(gen));
  }
  const auto m = fit_regression(RegressionKind::logistic4, x, y);
  EXPECT_LE(curve_rmse(m, x, truth), 0.05);
}

TEST(Regression, StoredRmseIsReproducible) {
  const Vec x{1, 2, 3, 4, 5, 6, 7, 8}, y{1.1, 1.3, 2.0, 2.9, 3.9, 4.4, 4.7, 4.8};
  for (auto kind : {RegressionKind::logistic4, RegressionKind::logistic5, RegressionKind::cubic4}) {
    const auto m = fit_regression(kind, x, y);
    EXPECT_NEAR(curve_rmse(m, x, y), m.rmse, 1e-12);
    EXPECT_NO_THROW(m.validate());
  }
  EXPECT_THROW(fit_regression(RegressionKind::logistic5, Vec{1, 2, 3, 4}, Vec{1, 2, 3, 4}), ValidationError);
}

TEST(Regression, NelderMeadQuadratic) {
  const Vec steps{1.0, 1.0};
  const auto r = nelder_mead([](std::span<const double> v) { return std::pow(v[0] - 3, 2) + 10 * std::pow(v[1] + 1, 2); },
                             {0.0, 0.0}, steps, 10000);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 3.0, 1e-5);
  EXPECT_NEAR(r.x[1], -1.0, 1e-5);
}

TEST(Selection, PicksHighestSroccAndIgnoresInapplicable) {
  std::mt19937 gen(3);
  std::normal_distribution<double> nd;
  Vec mos, good, weak, geo;
  for (int i = 0; i < 40; ++i) {
    mos.push_back(1.0 + 4.0 * i / 39.0);
    good.push_back(mos.back() + 0.2 * nd(gen));
    weak.push_back(mos.back() + 1.0 * nd(gen));
    geo.push_back(mos.back());  // perfect, but geometry metrics are out for a color distortion
  }
  TypeScores scores;
  scores[2][MetricId::parse("PSNRyuv")] = weak;
  scores[2][MetricId::external("PCQM")] = good;
  scores[2][MetricId::parse("M-p2po")] = geo;
  const auto sel = select_best_metric(scores, {{2, mos}});
  EXPECT_EQ(sel.at(2).metric, MetricId::external("PCQM"));
  EXPECT_EQ(sel.at(2).candidates.size(), 2u);

  // Monotone rescaling of a candidate does not change the choice.
  for (double& v : scores[2][MetricId::external("PCQM")]) v = std::exp(v);
  EXPECT_EQ(select_best_metric(scores, {{2, mos}}).at(2).metric, MetricId::external("PCQM"));
}

TEST(Selection, SingleCandidateAndErrors) {
  const Vec mos{1, 2, 3, 4}, s{4, 3, 2, 1};
  TypeScores one{{5, {{MetricId::parse("PSNRyuv"), s}}}};
  EXPECT_EQ(select_best_metric(one, {{5, mos}}).at(5).metric, MetricId::parse("PSNRyuv"));
  TypeScores none{{5, {{MetricId::parse("M-p2po"), s}}}};
  EXPECT_NE(message_of([&] { select_best_metric(none, {{5, mos}}); }).find("no applicable metric"), std::string::npos);
  TypeScores short_vec{{5, {{MetricId::parse("PSNRyuv"), Vec{1, 2}}}}};
  EXPECT_THROW(select_best_metric(short_vec, {{5, Vec{1, 2}}}), ValidationError);
}

TEST(Selection, TiesBreakByPlccThenMetricOrder) {
  const Vec mos{1, 2, 3, 4, 5};
  TypeScores t;
  t[17][MetricId::parse("H-p2po")] = Vec{1, 2, 3, 4, 50};  // same ranks, lower PLCC
  t[17][MetricId::parse("M-p2pl")] = Vec{1, 2, 3, 4, 5};
  t[17][MetricId::parse("M-p2po")] = Vec{2, 4, 6, 8, 10};
  EXPECT_EQ(select_best_metric(t, {{17, mos}}).at(17).metric, MetricId::parse("M-p2po"));
}

TEST(Selection, NoisyCopyBeatsRandomOverSeeds) {
  int wins = 0;
  for (std::uint32_t seed = 0; seed < 50; ++seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    Vec mos, a, b;
    for (int i = 0; i < 30; ++i) {
      mos.push_back(1 + 4 * std::uniform_real_distribution<double>()(gen));
      a.push_back(mos.back() + 0.5 * nd(gen));
      b.push_back(nd(gen));
    }
    TypeScores t{{1, {{MetricId::external("A"), a}, {MetricId::external("B"), b}}}};
    wins += select_best_metric(t, {{1, mos}}).at(1).metric == MetricId::external("A");
  }
  EXPECT_EQ(wins, 50);
}

TEST(PseudoMos, ClampsAndRecordsSource) {
  const MetricId m = MetricId::parse("PSNRyuv");
  std::map<int, TypeFit> fits{{2, {m, RegressionModel{RegressionKind::cubic4, {0, 0, 1, 0}, 0, 0, true}}}};
  std::vector<Stimulus> stimuli{{"a", 2, 1, 4.0}, {"b", 2, 3, {}}, {"c", 2, 7, {}}};
  ScoreTable scores{{"a", {{m, 3.5}}}, {"b", {{m, 9.0}}}, {"c", {{m, -2.0}}}};
  const auto r = generate_pseudo_mos(fits, stimuli, scores);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0].pseudo_mos, 3.5);
  EXPECT_EQ(*r[0].annotation_error(), 0.5);
  EXPECT_EQ(r[1].pseudo_mos, 5.0);
  EXPECT_FALSE(r[1].annotation_error().has_value());
  EXPECT_EQ(r[2].pseudo_mos, 1.0);
  EXPECT_EQ(r[2].source_metric, m);
  std::vector<Stimulus> orphan{{"a", 3, 1, {}}};
  EXPECT_THROW(generate_pseudo_mos(fits, orphan, scores), ValidationError);
  std::vector<Stimulus> missing{{"z", 2, 1, {}}};
  EXPECT_THROW(generate_pseudo_mos(fits, missing, scores), ValidationError);
}

TEST(PseudoMos, SyntheticPipelineCorrelates) {
  std::mt19937 gen(11);
  std::normal_distribution<double> nd;
  const MetricId m = MetricId::parse("PSNRyuv");
  Vec fit_score, fit_mos;
  std::vector<Stimulus> stimuli;
  ScoreTable table;
  Vec holdout_mos;
  for (int i = 0; i < 120; ++i) {
    const double latent = std::uniform_real_distribution<double>(0, 1)(gen);
    const double mos = 1.0 + 4.0 / (1.0 + std::exp(-8.0 * (latent - 0.5))) + 0.1 * nd(gen);
    const double score = 20.0 + 30.0 * latent + 0.5 * nd(gen);
    const std::string id = "s" + std::to_string(i);
    table[id][m] = score;
    if (i < 60) {
      fit_score.push_back(score);
      fit_mos.push_back(mos);
    } else {
      stimuli.push_back({id, 1, 1, mos});
      holdout_mos.push_back(mos);
    }
  }
  std::map<int, TypeFit> fits{{1, {m, fit_regression(RegressionKind::logistic5, fit_score, fit_mos)}}};
  Vec pseudo;
  for (const auto& r : generate_pseudo_mos(fits, stimuli, table)) {
    EXPECT_GE(r.pseudo_mos, 1.0);
    EXPECT_LE(r.pseudo_mos, 5.0);
    pseudo.push_back(r.pseudo_mos);
  }
  EXPECT_GE(srocc(pseudo, holdout_mos), 0.9);
}

TEST(ErrorStats, HandValues) {
  const auto s = annotation_error_stats(Vec{0.1, -0.1});
  EXPECT_NEAR(s.mean, 0.0, 1e-15);
  EXPECT_NEAR(s.stddev, 0.1, 1e-15);
  EXPECT_NEAR(s.q95, 0.1, 1e-15);
  const auto z = annotation_error_stats(Vec{0, 0, 0});
  EXPECT_EQ(z.mean, 0.0);
  EXPECT_EQ(z.stddev, 0.0);
  EXPECT_EQ(z.q95, 0.0);
  EXPECT_EQ(z.histogram[10], 3u);
  EXPECT_THROW(annotation_error_stats(Vec{1.0}), ValidationError);
}

TEST(ErrorStats, QuantileAndHistogram) {
  EXPECT_NEAR(quantile(Vec{5, 1, 4, 2, 3}, 0.95), 4.8, 1e-12);
  EXPECT_EQ(quantile(Vec{5, 1, 4, 2, 3}, 0.5), 3.0);
  const auto s = annotation_error_stats(Vec{-3.0, -2.5, -0.01, 0.0, 0.24, 0.25, 2.49, 2.5, 7.0});
  EXPECT_EQ(s.underflow, 1u);
  EXPECT_EQ(s.overflow, 1u);
  EXPECT_EQ(s.histogram[0], 1u);
  EXPECT_EQ(s.histogram[9], 1u);
  EXPECT_EQ(s.histogram[10], 2u);
  EXPECT_EQ(s.histogram[11], 1u);
  EXPECT_EQ(s.histogram[19], 2u);
  Vec errors{-0.5, 0.2, 0.9, -1.4, 0.3};
  Vec abs;
  for (double e : errors) abs.push_back(std::abs(e));
  EXPECT_EQ(annotation_error_stats(errors).q95, quantile(abs, 0.95));
}

}  // namespace
}  // namespace pcqa
