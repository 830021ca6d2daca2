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

#include "sctk/seg_eval.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.h"
#include "sctk/error.h"

namespace sctk {
namespace {

LabelMaskVolume Mask(std::size_t nx, std::size_t ny, std::size_t nz, std::vector<LabelId> labels,
                     std::map<LabelId, std::string> names) {
  LabelMaskVolume m;
  m.geometry = testing::MakeGeometry(nx, ny, nz);
  m.labels = std::move(labels);
  m.label_names = std::move(names);
  return m;
}

const std::map<LabelId, std::string> kNames = {{1, "liver"}, {2, "spleen"}, {3, "bone"}};

TEST(MeanLabelIouTest, IdentityWithThreeLabels) {
  const auto m = Mask(3, 2, 1, {0, 1, 1, 2, 3, 3}, kNames);
  const auto r = MeanLabelIou(m, m);
  EXPECT_EQ(r.mean, 1.0);
  ASSERT_EQ(r.per_label.size(), 3u);
  for (const auto& l : r.per_label) EXPECT_EQ(l.iou, 1.0);
  EXPECT_EQ(r.per_label[0].name, "bone");
}

TEST(MeanLabelIouTest, OneSixth) {
  // liver: gt {0,1}, syn {1,2} -> 1/3. spleen only in gt -> 0.
  const auto gt = Mask(4, 1, 1, {1, 1, 0, 2}, kNames);
  const auto syn = Mask(4, 1, 1, {0, 1, 1, 0}, kNames);
  const auto r = MeanLabelIou(gt, syn);
  EXPECT_DOUBLE_EQ(r.mean, 1.0 / 6.0);
  ASSERT_EQ(r.per_label.size(), 2u);
  EXPECT_DOUBLE_EQ(r.per_label[0].iou, 1.0 / 3.0);
  EXPECT_EQ(r.per_label[1].name, "spleen");
  EXPECT_EQ(r.per_label[1].iou, 0.0);
}

TEST(MeanLabelIouTest, EmptyPredictionAndBothEmpty) {
  const auto gt = Mask(2, 2, 1, {0, 1, 1, 0}, kNames);
  const auto bg = Mask(2, 2, 1, {0, 0, 0, 0}, kNames);
  EXPECT_EQ(MeanLabelIou(gt, bg).mean, 0.0);
  EXPECT_EQ(MeanLabelIou(bg, bg).mean, 1.0);
  const auto other = Mask(2, 3, 1, std::vector<LabelId>(6, 0), kNames);
  EXPECT_THROW(MeanLabelIou(gt, other), Error);
}

TEST(MeanLabelIouTest, MatchesByNameNotId) {
  const auto gt = Mask(3, 1, 1, {1, 2, 0}, {{1, "a"}, {2, "b"}});
  const auto syn = Mask(3, 1, 1, {7, 4, 0}, {{7, "a"}, {4, "b"}});
  EXPECT_EQ(MeanLabelIou(gt, syn).mean, 1.0);
}

TEST(MeanLabelIouPropertyTest, LabelPermutationInvariance) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<LabelId> a(60), b(60);
    for (auto& x : a) x = rng() % 4;
    for (auto& x : b) x = rng() % 4;
    std::vector<LabelId> perm = {0, 1, 2, 3};
    std::shuffle(perm.begin() + 1, perm.end(), rng);
    std::map<LabelId, std::string> renamed;
    for (const auto& [id, name] : kNames) renamed[perm[id]] = name;
    auto pa = a, pb = b;
    for (auto& x : pa) x = perm[x];
    for (auto& x : pb) x = perm[x];
    const double base = MeanLabelIou(Mask(6, 10, 1, a, kNames), Mask(6, 10, 1, b, kNames)).mean;
    const double moved =
        MeanLabelIou(Mask(6, 10, 1, pa, renamed), Mask(6, 10, 1, pb, renamed)).mean;
    EXPECT_DOUBLE_EQ(base, moved);
    const auto m = Mask(6, 10, 1, a, kNames);
    if (std::any_of(a.begin(), a.end(), [](LabelId l) { return l != 0; })) {
      EXPECT_EQ(MeanLabelIou(m, m).mean, 1.0);
    }
  }
}

TEST(SliceIouTest, AveragesPlanesWithForeground) {
  // Plane 0 perfect, plane 1 empty in both, plane 2 liver 1/3.
  const auto gt = Mask(3, 1, 3, {1, 0, 0, 0, 0, 0, 1, 1, 0}, kNames);
  const auto syn = Mask(3, 1, 3, {1, 0, 0, 0, 0, 0, 0, 1, 1}, kNames);
  const auto per = PerSliceLabelIou(gt, syn);
  ASSERT_EQ(per.size(), 3u);
  EXPECT_EQ(per[0].mean, 1.0);
  EXPECT_TRUE(per[1].per_label.empty());
  EXPECT_DOUBLE_EQ(per[2].mean, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(MeanSliceIou(gt, syn).mean, (1.0 + 1.0 / 3.0) / 2.0);
  EXPECT_EQ(TransverseMaskSlice(gt, 2).labels, (std::vector<LabelId>{1, 1, 0}));
}

TEST(CohortIouTest, PatientAndPooledMeans) {
  MeanIouResult a;
  a.mean = 0.5;
  a.per_label = {{"bone", 1.0}, {"liver", 0.0}};
  MeanIouResult b;
  b.mean = 1.0;
  b.per_label = {{"bone", 1.0}};
  const auto c = AggregateCohortIou(std::vector<MeanIouResult>{a, b});
  EXPECT_EQ(c.patients, 2u);
  EXPECT_DOUBLE_EQ(c.patient_mean, 0.75);
  // Entries bone 1.0, liver 0.0, bone 1.0.
  EXPECT_DOUBLE_EQ(c.pooled_label_mean, 2.0 / 3.0);
}

TEST(LabelMapTest, ParseAndIo) {
  const auto names = ParseLabelMap("# id\tname\n1\tliver\n2\tspleen\n\n");
  EXPECT_EQ(names.at(2), "spleen");
  EXPECT_EQ(ParseLabelMap(LabelMapToTsv(names)), names);
  EXPECT_EQ(ParseLabelMap("1 liver\n").at(1), "liver");
  EXPECT_THROW(ParseLabelMap("liver\n"), Error);
  EXPECT_THROW(ParseLabelMap("x\tliver\n"), Error);
  EXPECT_THROW(ParseLabelMap("1\tliver\n1\tbone\n"), Error);
  EXPECT_EQ(LabelMapPathFor("/x/mask.nii.gz"), std::filesystem::path("/x/mask.labels.tsv"));
  EXPECT_EQ(LabelMapPathFor("/x/seg.nii"), std::filesystem::path("/x/seg.labels.tsv"));

  const auto dir = testing::ScratchDir("label_mask");
  const auto m = Mask(3, 2, 1, {0, 1, 1, 2, 3, 3}, kNames);
  WriteLabelMask(m, dir / "mask.nii.gz");
  const auto back = ReadLabelMask(dir / "mask.nii.gz");
  EXPECT_EQ(back.labels, m.labels);
  EXPECT_EQ(back.label_names, m.label_names);

  auto unnamed = m;
  unnamed.label_names.erase(3);
  EXPECT_THROW(unnamed.Validate(), Error);
}

TEST(EvalSubsetTest, CountsAndDeterminism) {
  std::vector<std::string> ten;
  for (int i = 0; i < 10; ++i) ten.push_back("p" + std::to_string(i));
  const auto a = SelectEvalSubset(ten, 0.5, 3);
  EXPECT_EQ(a.size(), 5u);
  EXPECT_EQ(a, SelectEvalSubset(ten, 0.5, 3));
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  auto reversed = ten;
  std::reverse(reversed.begin(), reversed.end());
  EXPECT_EQ(a, SelectEvalSubset(reversed, 0.5, 3));
  EXPECT_EQ(SelectEvalSubset(ten, 1.0, 3), ten);
  const std::vector<std::string> three = {"a", "b", "c"};
  EXPECT_EQ(SelectEvalSubset(three, 0.5, 0).size(), 2u);
  EXPECT_THROW(SelectEvalSubset(three, 0.0, 0), Error);
}

}  // namespace
}  // namespace sctk
