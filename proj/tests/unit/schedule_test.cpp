#include <gtest/gtest.h>

#include <numeric>

#include "infoflow/error.hpp"
#include "infoflow/schedule.hpp"

using namespace infoflow;

namespace {

InputSchedule one_entry(double t, double v) {
  InputSchedule s;
  s.entries = {{t, v}};
  return s;
}

// Midpoint rule on a fine lattice, independent of the closed-form overlap.
double quadrature(const SourceTerm& q, double t0, double t1, int n) {
  const double h = (t1 - t0) / n;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += q.rate(t0 + (k + 0.5) * h);
  return sum * h;
}

}  // namespace

TEST(Source, SpatialProfileHasUnitMass) {
  const SimulationGrid g(GridSpec{});
  const SourceTerm q = render_entries(one_entry(0.1, 0.5), g);
  const auto w = g.domain_weights();
  double mass = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) mass += w[i] * q.spatial()[i];
  EXPECT_NEAR(mass, 1.0, 1e-14);
  EXPECT_EQ(q.spatial()[0], 0.0);
  EXPECT_GT(q.spatial()[1], 0.0);
  EXPECT_GT(q.spatial()[2], 0.0);
  EXPECT_EQ(q.spatial()[3], 0.0);
}

TEST(Source, TopHatRate) {
  const SimulationGrid g(GridSpec{});
  const SourceTerm q = render_entries(one_entry(0.2, 0.8), g);
  EXPECT_EQ(q.rate(0.1999), 0.0);
  EXPECT_DOUBLE_EQ(q.rate(0.2), 0.8 / 0.16);
  EXPECT_DOUBLE_EQ(q.rate(0.3), 0.8 / 0.16);
  EXPECT_EQ(q.rate(0.36), 0.0);
}

TEST(Source, InjectedVolumeMatchesQuadrature) {
  const SimulationGrid g(GridSpec{});
  InputSchedule s;
  s.entries = {{0.05, 0.3}, {0.1, 0.7}, {0.9, 0.4}};
  const SourceTerm q = render_entries(s, g);
  EXPECT_NEAR(q.injected(0.0, 1.0), quadrature(q, 0.0, 1.0, 200000), 1e-5);
  EXPECT_NEAR(q.injected(0.12, 0.2), quadrature(q, 0.12, 0.2, 200000), 1e-6);
  // The last entry is only 10/16 delivered by t = 1.
  EXPECT_NEAR(q.injected(0.0, 1.0), 0.3 + 0.7 + 0.4 * 0.625, 1e-14);
  EXPECT_NEAR(q.injected(0.0, 2.0), s.total_volume(), 1e-14);
}

TEST(Source, MeanRateIsInjectedOverLength) {
  const SimulationGrid g(GridSpec{});
  const SourceTerm q = render_entries(one_entry(0.0, 1.0), g);
  EXPECT_NEAR(q.mean_rate(0.15, 0.17), 3.125, 1e-12);
  EXPECT_DOUBLE_EQ(q.mean_rate(0.1, 0.1), q.rate(0.1));
}

TEST(Source, OverlappingEntriesAdd) {
  const SimulationGrid g(GridSpec{});
  InputSchedule s;
  s.entries = {{0.1, 0.16}, {0.15, 0.32}};
  const SourceTerm q = render_entries(s, g);
  EXPECT_DOUBLE_EQ(q.rate(0.2), 1.0 + 2.0);
}

TEST(Source, EmptyScheduleIsZero) {
  const SimulationGrid g(GridSpec{});
  const SourceTerm q = render_entries(InputSchedule{}, g);
  EXPECT_TRUE(q.empty());
  EXPECT_EQ(q.rate(0.5), 0.0);
  EXPECT_EQ(q.injected(0.0, 1.0), 0.0);
}

TEST(Source, RejectsInvalidEntries) {
  const SimulationGrid g(GridSpec{});
  EXPECT_THROW(render_entries(one_entry(-0.1, 1.0), g), Error);
  EXPECT_THROW(render_entries(one_entry(1.5, 1.0), g), Error);
  EXPECT_THROW(render_entries(one_entry(0.5, -1.0), g), Error);
  InputSchedule s = one_entry(0.5, 1.0);
  s.profile.duration = 0.0;
  EXPECT_THROW(render_entries(s, g), Error);
  s = one_entry(0.5, 1.0);
  s.profile.site = {0.01, 0.02};
  EXPECT_THROW(render_entries(s, g), Error);
}
