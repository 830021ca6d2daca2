// Copyright 2026 The sctk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sctk/frechet.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"
#include "sctk/embedding.h"
#include "sctk/error.h"

namespace sctk {
namespace {

GaussianStats Stats(std::vector<double> mean, std::vector<double> cov) {
  GaussianStats s;
  s.dim = mean.size();
  s.mean = std::move(mean);
  s.covariance = std::move(cov);
  return s;
}

std::vector<double> RandomSpd(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> b(n * n);
  for (double& x : b) x = g(rng);
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) a[i * n + j] += b[i * n + k] * b[j * n + k];
    }
    a[i * n + i] += 0.5;
  }
  return a;
}

TEST(FitGaussianTest, HandComputed) {
  const EmbeddingSet set(2, {0, 0, 2, 0}, "t");
  const GaussianStats s = FitGaussian(set);
  EXPECT_EQ(s.mean, (std::vector<double>{1.0, 0.0}));
  // Unbiased covariance [[2, 0], [0, 0]] is singular and gets the ridge.
  EXPECT_TRUE(s.regularized);
  EXPECT_NEAR(s.cov(0, 0), 2.0, 1e-5);
  EXPECT_NEAR(s.cov(1, 1), 0.0, 1e-5);
  EXPECT_EQ(s.cov(0, 1), 0.0);
}

TEST(FitGaussianTest, WellConditionedIsNotRegularized) {
  const EmbeddingSet set(2, {0, 0, 2, 0, 0, 2, 2, 2}, "t");
  const GaussianStats s = FitGaussian(set);
  EXPECT_FALSE(s.regularized);
  EXPECT_DOUBLE_EQ(s.cov(0, 0), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.cov(1, 1), 4.0 / 3.0);
  EXPECT_EQ(s.cov(0, 1), 0.0);
}

TEST(FitGaussianTest, IdenticalVectorsAndSymmetry) {
  const EmbeddingSet same(3, {1, 2, 3, 1, 2, 3, 1, 2, 3}, "t");
  const GaussianStats s = FitGaussian(same);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(s.cov(i, j), i == j ? kCovarianceRegularization : 0.0, 1e-15);
    }
  }
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  std::vector<double> v(40 * 6);
  for (double& x : v) x = g(rng);
  const GaussianStats r = FitGaussian(EmbeddingSet(6, v, "t"));
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(r.cov(i, j), r.cov(j, i), 1e-12);
  }
  EXPECT_THROW(FitGaussian(EmbeddingSet(2, {1, 2}, "t")), Error);
}

TEST(FrechetTest, AnalyticCases) {
  const auto id = Stats({0, 0}, {1, 0, 0, 1});
  EXPECT_LE(std::abs(FrechetDistance(id, id)), 1e-6);
  EXPECT_NEAR(FrechetDistance(Stats({1, 0}, {1, 0, 0, 1}), id), 1.0, 1e-6);
  EXPECT_NEAR(FrechetDistance(Stats({0, 0}, {4, 0, 0, 4}), id), 2.0, 1e-6);
  // Diagonal commuting case: sum (sqrt(a) - sqrt(b))^2 plus mean term.
  const auto a = Stats({1, 2, 3}, {9, 0, 0, 0, 1, 0, 0, 0, 0.25});
  const auto b = Stats({0, 2, 5}, {1, 0, 0, 0, 4, 0, 0, 0, 1});
  EXPECT_NEAR(FrechetDistance(a, b), 1 + 4 + 4 + 1 + 0.25, 1e-9);
  EXPECT_THROW(FrechetDistance(id, Stats({0}, {1})), Error);
}

TEST(FrechetTest, PsdSqrtMatchesNewtonSchulz) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 6;
    const auto a = RandomSpd(n, rng);
    const auto got = SymmetricPsdSqrt(a, n);
    const auto want = oracle::NewtonSchulzSqrt(a, n);
    for (std::size_t i = 0; i < n * n; ++i) EXPECT_NEAR(got[i], want[i], 1e-8);
  }
  // Negative eigenvalues clip to zero.
  const auto clipped = SymmetricPsdSqrt({1, 0, 0, -4}, 2);
  EXPECT_NEAR(clipped[0], 1.0, 1e-15);
  EXPECT_NEAR(clipped[3], 0.0, 1e-15);
}

TEST(FrechetPropertyTest, SymmetryAndOracleOnRandomPairs) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    std::vector<double> ma(n), mb(n);
    for (auto& x : ma) x = g(rng);
    for (auto& x : mb) x = g(rng);
    const auto a = Stats(ma, RandomSpd(n, rng));
    const auto b = Stats(mb, RandomSpd(n, rng));
    const double ab = FrechetDistance(a, b);
    EXPECT_GE(ab, 0.0);
    EXPECT_NEAR(ab, FrechetDistance(b, a), 1e-6);
    EXPECT_NEAR(ab, oracle::FrechetOracle(ma, a.covariance, mb, b.covariance, n), 1e-6);
    EXPECT_LE(FrechetDistance(a, a), 1e-6);
  }
}

}  // namespace
}  // namespace sctk
