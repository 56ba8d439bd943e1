#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "infoflow/random.hpp"

using namespace infoflow;

TEST(Random, SameSeedSameSequence) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.uniform(), b.uniform());
    EXPECT_EQ(a.normal(), b.normal());
  }
}

TEST(Random, DerivedSeedsSeparateStreams) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 50; ++i) {
    seeds.insert(derive_seed(7, "generation", i));
    seeds.insert(derive_seed(7, "resampling", i));
    seeds.insert(derive_seed(8, "generation", i));
  }
  EXPECT_EQ(seeds.size(), 150u);
  EXPECT_EQ(derive_seed(7, "generation", 3), derive_seed(7, "generation", 3));
}

TEST(Random, UniformStaysInRange) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(rng.index(7), 7u);
  }
}

TEST(Random, NormalMomentsFollowTheLaw) {
  Rng rng(3);
  const int n = 100000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal(2.0, 3.0);
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  EXPECT_NEAR(mean, 2.0, 0.05);
  EXPECT_NEAR(var, 9.0, 0.2);
}

TEST(Random, NormalDrawsAreUncorrelated) {
  Rng rng(4);
  std::vector<double> z(10000);
  for (double& v : z) v = rng.normal();
  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= z.size();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    den += (z[i] - mean) * (z[i] - mean);
    if (i + 1 < z.size()) num += (z[i] - mean) * (z[i + 1] - mean);
  }
  EXPECT_LT(std::abs(num / den), 0.1);
}

TEST(Random, SampleWithoutReplacement) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = rng.sample_without_replacement(30, 20);
    ASSERT_EQ(s.size(), 20u);
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LT(s[i - 1], s[i]);
    EXPECT_LT(s.back(), 30u);
  }
  EXPECT_EQ(rng.sample_without_replacement(5, 5), (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_TRUE(rng.sample_without_replacement(5, 0).empty());
}

TEST(Random, SubsamplesCoverAllIndices) {
  Rng rng(6);
  std::vector<int> hits(30, 0);
  for (int trial = 0; trial < 300; ++trial) {
    for (std::size_t k : rng.sample_without_replacement(30, 20)) ++hits[k];
  }
  for (int h : hits) EXPECT_NEAR(h, 200, 40);
}
