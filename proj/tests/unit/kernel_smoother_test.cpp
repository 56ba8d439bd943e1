#include <gtest/gtest.h>

#include <cmath>

#include "infoflow/error.hpp"
#include "infoflow/kernel_smoother.hpp"
#include "infoflow/random.hpp"

using namespace infoflow;

namespace {

double brute_force(const std::vector<SupportPoint>& pts, double h, double x) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& p : pts) {
    const double z = (x - p.x) / h;
    const double w = std::exp(-0.5 * z * z);
    num += w * p.y;
    den += w;
  }
  return num / den;
}

}  // namespace

TEST(KernelSmoother, MatchesDirectSummation) {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SupportPoint> pts;
    const std::size_t n = 1 + rng.index(30);
    for (std::size_t i = 0; i < n; ++i) pts.push_back({rng.uniform(5, 20), rng.uniform(20, 60)});
    const double h = rng.uniform(0.3, 5.0);
    const RelationModel m(pts, h);
    const double x = rng.uniform(4, 21);
    const double expected = brute_force(pts, h, x);
    EXPECT_LE(std::abs(m(x) - expected), 1e-12 * std::abs(expected)) << trial;
  }
}

TEST(KernelSmoother, SinglePointIsConstant) {
  const RelationModel m({{10.0, 35.0}}, 1.0);
  EXPECT_EQ(m(3.0), 35.0);
  EXPECT_EQ(m(10.0), 35.0);
  EXPECT_EQ(m(500.0), 35.0);
}

TEST(KernelSmoother, FlagsExtrapolation) {
  const RelationModel m({{5.0, 1.0}, {10.0, 2.0}}, 1.0);
  EXPECT_FALSE(m.predict(7.0).extrapolated);
  EXPECT_FALSE(m.predict(5.0).extrapolated);
  EXPECT_TRUE(m.predict(4.9).extrapolated);
  EXPECT_TRUE(m.predict(10.1).extrapolated);
}

TEST(KernelSmoother, FallsBackToNearestPointWhenWeightsUnderflow) {
  const RelationModel m({{0.0, 1.0}, {1.0, 2.0}}, 0.1);
  const auto p = m.predict(100.0);
  EXPECT_TRUE(p.nearest_fallback);
  EXPECT_EQ(p.value, 2.0);
  EXPECT_FALSE(m.predict(0.5).nearest_fallback);
}

TEST(KernelSmoother, PredictionIsConvexCombination) {
  Rng rng(5);
  std::vector<SupportPoint> pts;
  for (int i = 0; i < 20; ++i) pts.push_back({rng.uniform(0, 1), rng.uniform(-3, 3)});
  const RelationModel m(pts, 0.1);
  for (int k = 0; k < 50; ++k) {
    const double v = m(rng.uniform(-0.5, 1.5));
    EXPECT_GE(v, -3.0);
    EXPECT_LE(v, 3.0);
  }
}

TEST(KernelSmoother, LeaveOneOutSelectsReasonableBandwidth) {
  std::vector<SupportPoint> pts;
  Rng rng(11);
  for (int i = 0; i < 30; ++i) {
    const double x = 5.0 + 15.0 * i / 29.0;
    pts.push_back({x, 2.0 * x + rng.normal(0.0, 0.5)});
  }
  const RelationModel m = fit_nw(pts);
  EXPECT_GT(m.bandwidth(), 0.0);
  EXPECT_LE(m.bandwidth(), 15.0);
  EXPECT_LE(leave_one_out_score(pts, m.bandwidth()), leave_one_out_score(pts, 15.0));
  EXPECT_LE(leave_one_out_score(pts, m.bandwidth()), leave_one_out_score(pts, 0.01));
  EXPECT_NEAR(m(12.0), 24.0, 1.5);
}

TEST(KernelSmoother, ExplicitBandwidthIsKept) {
  const RelationModel m = fit_nw({{1, 1}, {2, 2}}, 0.7);
  EXPECT_EQ(m.bandwidth(), 0.7);
}

TEST(KernelSmoother, RejectsInvalidInput) {
  EXPECT_THROW(fit_nw({}), Error);
  EXPECT_THROW(fit_nw({{1, 1}, {1, 2}}), Error);
  EXPECT_THROW(RelationModel({{1, 1}}, 0.0), Error);
  EXPECT_THROW(RelationModel({}, 1.0), Error);
}
