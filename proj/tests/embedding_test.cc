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

#include "sctk/embedding.h"

#include <gtest/gtest.h>

#include <random>

#include "fixtures.h"
#include "sctk/error.h"

namespace sctk {
namespace {

Slice RandomSlice(std::size_t nx, std::size_t ny, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Slice s;
  s.nx = nx;
  s.ny = ny;
  s.pixels.resize(nx * ny);
  for (double& x : s.pixels) x = u(rng);
  return s;
}

TEST(BlockMeanEmbedderTest, MatchesBruteForceOn64x64) {
  std::mt19937_64 rng(10);
  const Slice s = RandomSlice(64, 64, rng);
  const BlockMeanEmbedder e(8);
  const auto v = e.Embed(s);
  ASSERT_EQ(v.size(), 64u);
  for (std::size_t by = 0; by < 8; ++by) {
    for (std::size_t bx = 0; bx < 8; ++bx) {
      double sum = 0.0;
      for (std::size_t y = by * 8; y < by * 8 + 8; ++y) {
        for (std::size_t x = bx * 8; x < bx * 8 + 8; ++x) sum += s.at(x, y);
      }
      EXPECT_NEAR(v[by * 8 + bx], sum / 64.0, 1e-14);
    }
  }
}

TEST(BlockMeanEmbedderTest, UnevenBlocksAndConstant) {
  Slice c;
  c.nx = 13;
  c.ny = 9;
  c.pixels.assign(13 * 9, 0.625);
  for (double x : BlockMeanEmbedder(4).Embed(c)) EXPECT_DOUBLE_EQ(x, 0.625);
  Slice tiny;
  tiny.nx = 3;
  tiny.ny = 3;
  tiny.pixels.assign(9, 0.0);
  EXPECT_THROW(BlockMeanEmbedder(8).Embed(tiny), Error);
}

TEST(EmbedderFactoryTest, Ids) {
  EXPECT_EQ(MakeEmbedder("block-mean-8")->dim(), 64u);
  EXPECT_EQ(MakeEmbedder("block-mean-4")->id(), "block-mean-4");
  EXPECT_THROW(MakeEmbedder("inception-v3"), Error);
  EXPECT_THROW(MakeEmbedder("block-mean-1"), Error);
}

TEST(EmbedSlicesTest, DeterministicAndSized) {
  std::mt19937_64 rng(1);
  std::vector<Slice> slices;
  for (int i = 0; i < 5; ++i) slices.push_back(RandomSlice(32, 32, rng));
  const BlockMeanEmbedder e(8);
  const auto a = EmbedSlices(slices, e);
  EXPECT_EQ(a.count(), 5u);
  EXPECT_EQ(a.dim(), 64u);
  EXPECT_EQ(a, EmbedSlices(slices, e));
}

TEST(EmbeddingFileTest, RoundTripAndErrors) {
  std::vector<double> v = {0.5, -1.25, 3.0, 4.0, 1e-3f, 7.0};
  const EmbeddingSet set(3, v, "external");
  const auto bytes = EncodeEmbeddings(set);
  EXPECT_EQ(bytes.size(), 16u + 6 * 4);
  EXPECT_EQ(bytes[0], 2u);
  EXPECT_EQ(bytes[8], 3u);
  const EmbeddingSet back = DecodeEmbeddings(bytes);
  EXPECT_EQ(back.count(), 2u);
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(back.values()[i], static_cast<double>(static_cast<float>(v[i])));
  }
  const auto dir = testing::ScratchDir("embeddings");
  WriteEmbeddingFile(set, dir / "e.bin");
  EXPECT_EQ(ReadEmbeddingFile(dir / "e.bin").count(), 2u);

  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_THROW(DecodeEmbeddings(truncated), Error);
  EXPECT_THROW(DecodeEmbeddings(std::vector<std::uint8_t>(8, 0)), Error);
}

}  // namespace
}  // namespace sctk
