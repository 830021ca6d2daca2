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

#include "sctk/ssim.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.h"
#include "sctk/error.h"

namespace sctk {
namespace {

Slice MakeSlice(std::size_t nx, std::size_t ny, std::vector<double> pixels) {
  Slice s;
  s.nx = nx;
  s.ny = ny;
  s.pixels = std::move(pixels);
  return s;
}

Slice RandomSlice(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n * n);
  for (double& x : p) x = u(rng);
  return MakeSlice(n, n, p);
}

TEST(SsimTest, GaussianTapsAreNormalizedAndSymmetric) {
  const auto taps = GaussianTaps(11, 1.5);
  ASSERT_EQ(taps.size(), 11u);
  EXPECT_NEAR(std::accumulate(taps.begin(), taps.end(), 0.0), 1.0, 1e-15);
  for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(taps[i], taps[10 - i]);
  EXPECT_NEAR(taps[4] / taps[5], std::exp(-1.0 / 4.5), 1e-15);
}

TEST(SsimTest, IdentityIsExactlyOne) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Slice s = RandomSlice(11 + rng() % 20, rng);
    EXPECT_EQ(Ssim(s, s), 1.0);
  }
}

TEST(SsimTest, ConstantImagesClosedForm) {
  const Slice zero = MakeSlice(16, 16, std::vector<double>(256, 0.0));
  const Slice one = MakeSlice(16, 16, std::vector<double>(256, 1.0));
  const double c1 = 0.01 * 0.01;
  EXPECT_NEAR(Ssim(zero, one), c1 / (1.0 + c1), 1e-15);
  EXPECT_NEAR(Ssim(zero, one), 9.999e-5, 1e-8);
}

TEST(SsimTest, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Slice a = RandomSlice(16, rng);
    const Slice b = RandomSlice(16, rng);
    const double got = Ssim(a, b);
    const double want = oracle::BruteForceSsim(a.pixels, b.pixels, 16, 16);
    worst = std::max(worst, std::abs(got - want));
    EXPECT_LE(std::abs(got), 1.0);
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(SsimTest, DynamicRangeScalesConstants) {
  std::mt19937_64 rng(3);
  Slice a = RandomSlice(20, rng);
  Slice b = RandomSlice(20, rng);
  SsimParams hu;
  hu.dynamic_range = 3000.0;
  const double unit = Ssim(a, b);
  for (double& x : a.pixels) x *= 3000.0;
  for (double& x : b.pixels) x *= 3000.0;
  EXPECT_NEAR(Ssim(a, b, hu), unit, 1e-9);
  EXPECT_NEAR(Ssim(a, b, hu), oracle::BruteForceSsim(a.pixels, b.pixels, 20, 20, 3000.0), 1e-6);
}

TEST(SsimTest, Errors) {
  const Slice small = MakeSlice(10, 10, std::vector<double>(100, 0.0));
  try {
    Ssim(small, small);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateInput);
  }
  const Slice a = MakeSlice(12, 12, std::vector<double>(144, 0.0));
  const Slice b = MakeSlice(12, 11, std::vector<double>(132, 0.0));
  EXPECT_THROW(Ssim(a, b), Error);
  SsimParams even;
  even.window = 10;
  EXPECT_THROW(Ssim(a, a, even), Error);
}

}  // namespace
}  // namespace sctk
