#include <gtest/gtest.h>

#include <cmath>

#include "infoflow/error.hpp"
#include "infoflow/metrics.hpp"

using namespace infoflow;

namespace {

Dataset endpoint_data(std::vector<double> y1) {
  Dataset d;
  for (std::size_t i = 0; i < y1.size(); ++i) {
    Individual ind;
    ind.id = "a" + std::to_string(i);
    ind.observations = {{0.0, 1.0}, {1.0, y1[i]}};
    d.individuals.push_back(ind);
  }
  return d;
}

}  // namespace

TEST(Metrics, RrssZeroForPerfectPrediction) {
  const std::vector<Curve> obs{{1.0, 2.0}, {0.5}};
  EXPECT_EQ(rrss(obs, obs), 0.0);
}

TEST(Metrics, RrssSumsSquaredRelativeErrors) {
  const std::vector<Curve> obs{{1.0, 2.0}, {4.0}};
  const std::vector<Curve> pred{{1.5, 1.0}, {5.0}};
  EXPECT_DOUBLE_EQ(rrss(obs, pred), 0.25 + 0.25 + 0.0625);
}

TEST(Metrics, RrssRejectsZeroObservationAndShapeMismatch) {
  EXPECT_THROW(rrss({{0.0}}, {{1.0}}), Error);
  EXPECT_THROW(rrss({{1.0, 2.0}}, {{1.0}}), Error);
  EXPECT_THROW(rrss({{1.0}}, {{1.0}, {1.0}}), Error);
}

TEST(Metrics, RSquaredReferencePoints) {
  const std::vector<double> obs{1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(r_squared(obs, obs), 1.0);
  const std::vector<double> mean(4, 2.5);
  EXPECT_DOUBLE_EQ(r_squared(obs, mean), 0.0);
  const std::vector<double> off{1.0, 2.0, 3.0, 5.0};
  EXPECT_DOUBLE_EQ(r_squared(obs, off), 1.0 - 1.0 / 5.0);
}

TEST(Metrics, RSquaredUndefinedCases) {
  EXPECT_THROW(r_squared(std::vector<double>{1.0}, std::vector<double>{1.0}), Error);
  EXPECT_THROW(r_squared(std::vector<double>{2.0, 2.0}, std::vector<double>{1.0, 2.0}), Error);
}

TEST(Metrics, AreUsesAbsoluteRelativeError) {
  const Dataset d = endpoint_data({2.0, 4.0});
  const std::vector<double> pred{2.2, 3.6};
  EXPECT_DOUBLE_EQ(are(d, pred, 1.0), 0.1);
  EXPECT_DOUBLE_EQ(ara(d, pred, 1.0), 0.9);
  EXPECT_EQ(are(d, std::vector<double>{2.0, 4.0}, 1.0), 0.0);
}

TEST(Metrics, AreRequiresObservationsAtInstant) {
  const Dataset d = endpoint_data({2.0});
  EXPECT_THROW(are(d, std::vector<double>{2.0}, 0.5), Error);
  EXPECT_THROW(are(d, std::vector<double>{2.0, 1.0}, 1.0), Error);
  EXPECT_THROW(are(endpoint_data({0.0}), std::vector<double>{1.0}, 1.0), Error);
}

TEST(Metrics, EvaluateAggregates) {
  const Dataset d = endpoint_data({2.0, 4.0});
  const std::vector<Curve> pred{{1.0, 2.2}, {1.0, 3.6}};
  const double instants[] = {1.0};
  const auto report = evaluate(d, pred, instants);
  ASSERT_EQ(report.per_individual.size(), 2u);
  EXPECT_NEAR(report.per_individual[0].rrss, 0.01, 1e-15);
  EXPECT_NEAR(report.total_rrss, 0.02, 1e-15);
  EXPECT_DOUBLE_EQ(report.per_individual[0].r_squared, 1.0 - 0.04 / 0.5);
  EXPECT_DOUBLE_EQ(report.mean_r_squared, 0.5 * ((1.0 - 0.04 / 0.5) + (1.0 - 0.16 / 4.5)));
  ASSERT_EQ(report.instants.size(), 1u);
  EXPECT_DOUBLE_EQ(report.instants[0].are, 0.1);
}

TEST(Metrics, EvaluateSkipsUndefinedRSquared) {
  Dataset d = endpoint_data({2.0});
  d.individuals[0].observations = {{0.0, 1.0}};
  const auto report = evaluate(d, {{1.0}}, {});
  EXPECT_TRUE(std::isnan(report.per_individual[0].r_squared));
  EXPECT_TRUE(std::isnan(report.mean_r_squared));
}
