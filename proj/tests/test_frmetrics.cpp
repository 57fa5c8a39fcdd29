// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sstream>

#include "pcqa/distort/distort.hpp"
#include "pcqa/distort/registry.hpp"
#include "pcqa/frmetrics/metrics.hpp"
#include "pcqa/frmetrics/scores.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace pcqa {
namespace {

using testing::random_cloud;

PointCloud single(const Vec3& p, Color c = {0, 0, 0}) {
  PointCloud out;
  out.push_back(p, c);
  return out;
}

// A perturbed copy: jittered positions, a few dropped points, noisy colors.
PointCloud perturbed(const PointCloud& ref, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> jitter(0.0, 1.5);
  std::uniform_int_distribution<int> col(-20, 20);
  PointCloud out;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    if (gen() % 10 == 0) continue;
    Color c = ref.colors[i];
    for (int& ch : c) ch = std::clamp(ch + col(gen), 0, 255);
    out.push_back(ref.positions[i] + Vec3(jitter(gen), jitter(gen), jitter(gen)), c);
  }
  return out;
}

TEST(P2Point, HandValues) {
  const PointCloud a = random_cloud(30, 1);
  EXPECT_EQ(p2point(a, a, Pooling::mse), 0.0);
  EXPECT_EQ(p2point(a, a, Pooling::hausdorff), 0.0);
  EXPECT_EQ(p2point(single(Vec3::Zero()), single(Vec3(3, 4, 0)), Pooling::mse), 25.0);
  EXPECT_THROW(p2point(PointCloud{}, a, Pooling::mse), ValidationError);
}

TEST(P2Point, MatchesExhaustiveOracle) {
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    const PointCloud a = random_cloud(20 + seed * 9, seed);
    const PointCloud b = perturbed(a, seed + 100);
    for (bool h : {false, true}) {
      const Pooling p = h ? Pooling::hausdorff : Pooling::mse;
      EXPECT_NEAR(p2point(a, b, p), oracle::p2point(a, b, h), 1e-9);
      EXPECT_NEAR(p2point_symmetric(a, b, p),
                  std::max(oracle::p2point(a, b, h), oracle::p2point(b, a, h)), 1e-9);
      EXPECT_EQ(p2point_symmetric(a, b, p), p2point_symmetric(b, a, p));
    }
    EXPECT_GE(p2point(a, b, Pooling::hausdorff), p2point(a, b, Pooling::mse));
  }
}

TEST(P2Plane, HandValues) {
  PointCloud ref = single(Vec3::Zero());
  ref.normals = std::vector<Vec3>{Vec3::UnitZ()};
  EXPECT_DOUBLE_EQ(p2plane(ref, single(Vec3(1, 0, 0.5)), Pooling::mse), 0.25);
  EXPECT_EQ(p2plane(ref, single(Vec3(0.3, -0.2, 0)), Pooling::mse), 0.0);
  EXPECT_THROW(p2plane(single(Vec3::Zero()), single(Vec3::Zero()), Pooling::mse), ValidationError);
}

TEST(P2Plane, MatchesOracleAndNeverExceedsP2Point) {
  for (std::uint32_t seed = 0; seed < 15; ++seed) {
    const PointCloud a = with_normals(random_cloud(40 + seed * 10, seed));
    const PointCloud b = perturbed(a, seed + 7);
    for (bool h : {false, true}) {
      const Pooling p = h ? Pooling::hausdorff : Pooling::mse;
      EXPECT_NEAR(p2plane(a, b, p), oracle::p2plane(a, *a.normals, b, h), 1e-9);
      EXPECT_LE(p2plane(a, b, p), p2point(a, b, p) + 1e-12);
    }
  }
}

TEST(Psnr, FormulaAndCap) {
  EXPECT_NEAR(psnr_from_peak(25.0, 5.0, 100.0), 0.0, 1e-15);
  EXPECT_EQ(psnr_from_peak(0.0, 5.0, 100.0), 100.0);
  EXPECT_NEAR(psnr_from_peak(0.25, 5.0, 100.0), 20.0, 1e-12);
  EXPECT_THROW(psnr_from_peak(1.0, 0.0, 100.0), ValidationError);
  EXPECT_THROW(psnr_from_peak(-1.0, 5.0, 100.0), ValidationError);
  PointCloud box = single(Vec3::Zero());
  box.push_back(Vec3(3, 4, 0), {0, 0, 0});
  EXPECT_NEAR(psnr_from_geometry(25.0, box, 100.0), 0.0, 1e-15);
  EXPECT_THROW(psnr_from_geometry(1.0, single(Vec3::Zero()), 100.0), ValidationError);
}

TEST(PsnrYuv, IdenticalHitsCap) {
  const PointCloud a = random_cloud(50, 3);
  EXPECT_EQ(psnr_yuv(a, a, Pooling::mse, 100.0), 100.0);
  for (const auto& m : builtin_metrics()) EXPECT_EQ(compute_metric(m, a, a, 100.0), 100.0) << m.name();
}

TEST(PsnrYuv, LumaOnlyOffset) {
  const PointCloud a = testing::constant_cloud(30, {100, 120, 140}, 5);
  PointCloud b = a;
  for (Color& c : b.colors) c = {110, 130, 150};  // +10 on every channel moves only Y
  const double y = 10.0 * std::log10(255.0 * 255.0 / 100.0);
  EXPECT_NEAR(psnr_yuv(a, b, Pooling::mse, 100.0), (6.0 * y + 200.0) / 8.0, 1e-6);
}

TEST(PsnrYuv, MatchesExhaustiveOracle) {
  for (std::uint32_t seed = 0; seed < 15; ++seed) {
    const PointCloud a = random_cloud(30 + seed * 11, seed);
    const PointCloud b = perturbed(a, seed + 50);
    for (bool h : {false, true}) {
      const Pooling p = h ? Pooling::hausdorff : Pooling::mse;
      EXPECT_NEAR(psnr_yuv(a, b, p, 100.0), oracle::psnr_yuv(a, b, h), 1e-9);
      EXPECT_EQ(psnr_yuv(a, b, p, 100.0), psnr_yuv(b, a, p, 100.0));
    }
    EXPECT_LE(psnr_yuv(a, b, Pooling::hausdorff, 100.0), psnr_yuv(a, b, Pooling::mse, 100.0));
  }
}

TEST(ComputeMetric, AllBuiltinsMatchOracle) {
  const PointCloud a = random_cloud(120, 77);
  const PointCloud b = perturbed(a, 78);
  const PointCloud an = with_normals(a), bn = with_normals(b);
  const double peak = oracle::diagonal(a);
  for (bool h : {false, true}) {
    const double po = std::max(oracle::p2point(a, b, h), oracle::p2point(b, a, h));
    const double pl = std::max(oracle::p2plane(an, *an.normals, b, h), oracle::p2plane(bn, *bn.normals, a, h));
    const MetricKind k_po = h ? MetricKind::h_p2po : MetricKind::m_p2po;
    const MetricKind k_pl = h ? MetricKind::h_p2pl : MetricKind::m_p2pl;
    const MetricKind k_yuv = h ? MetricKind::h_psnr_yuv : MetricKind::psnr_yuv;
    EXPECT_NEAR(compute_metric({k_po, {}}, a, b, 100.0), oracle::psnr(po, peak), 1e-9);
    EXPECT_NEAR(compute_metric({k_pl, {}}, a, b, 100.0), oracle::psnr(pl, peak), 1e-9);
    EXPECT_NEAR(compute_metric({k_yuv, {}}, a, b, 100.0), oracle::psnr_yuv(a, b, h), 1e-9);
  }
  EXPECT_THROW(compute_metric(MetricId::external("PCQM"), a, b, 100.0), ValidationError);
}

TEST(ComputeMetric, GeometryShiftMonotone) {
  const PointCloud ref = random_cloud(500, 90);
  double prev = 0.0;
  for (int level = 1; level <= 7; ++level) {
    double mean = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      mean += p2point_symmetric(ref, apply_distortion(ref, DistortionSpec{17, level, seed}), Pooling::mse);
    EXPECT_GE(mean, prev);
    prev = mean;
  }
}

TEST(MetricId, NamesAndApplicability) {
  std::vector<std::string> names;
  for (const auto& m : builtin_metrics()) {
    names.push_back(m.name());
    EXPECT_EQ(MetricId::parse(m.name()), m);
  }
  EXPECT_EQ(names, (std::vector<std::string>{"M-p2po", "M-p2pl", "H-p2po", "H-p2pl", "PSNRyuv", "H-PSNRyuv"}));
  EXPECT_EQ(MetricId::parse("PCQM").kind, MetricKind::external);
  EXPECT_THROW(MetricId::external(""), ValidationError);
  const MetricId po{MetricKind::m_p2po, {}};
  const MetricId yuv{MetricKind::psnr_yuv, {}};
  EXPECT_FALSE(metric_applicable(po, describe_distortion(2)));
  EXPECT_TRUE(metric_applicable(po, describe_distortion(17)));
  EXPECT_TRUE(metric_applicable(yuv, describe_distortion(2)));
  EXPECT_TRUE(metric_applicable(MetricId::external("PCQM"), describe_distortion(2)));
}

TEST(Scores, ExternalIngestionIsVerbatim) {
  std::istringstream in("metric_name,reference_id,degraded_id,value\nPCQM,r1,d1,0.0125\nPCQM,r1,d2,0.9\n");
  const auto s = ingest_external_scores(in);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].metric, MetricId::external("PCQM"));
  EXPECT_EQ(s[0].value, 0.0125);
  EXPECT_EQ(s[1].degraded_id, "d2");
}

TEST(Scores, Errors) {
  auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_scores(in);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("metric_name,reference_id,value\nA,r,1\n").find("missing column"), std::string::npos);
  EXPECT_NE(message("metric_name,reference_id,degraded_id,value\nA,r,d,abc\n").find("non-numeric"),
            std::string::npos);
  EXPECT_NE(message("metric_name,reference_id,degraded_id,value\nA,r,d,1\nA,r,d,2\n").find("duplicate key (A, d)"),
            std::string::npos);
  EXPECT_NE(message("").find("empty"), std::string::npos);
}

TEST(Scores, WriteReadRoundTripIsExact) {
  std::vector<MetricScore> scores{{MetricId::parse("M-p2po"), 1.0 / 3.0, "r", "d1"},
                                  {MetricId::parse("PSNRyuv"), 100.0, "r", "d1"},
                                  {MetricId::external("PCQM"), 1e-300, "r", "d2"}};
  std::stringstream io;
  write_scores(io, scores);
  const auto back = read_scores(io);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].metric, scores[i].metric);
    EXPECT_EQ(back[i].value, scores[i].value);
  }
}

}  // namespace
}  // namespace pcqa
