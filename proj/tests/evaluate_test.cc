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

#include "sctk/evaluate.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.h"
#include "sctk/config.h"
#include "sctk/error.h"
#include "sctk/nifti.h"
#include "sctk/preprocess.h"
#include "sctk/report.h"

namespace sctk {
namespace {

namespace fs = std::filesystem;

TEST(RunConfigTest, ParsesAndResolvesRelativePaths) {
  const auto c = ParseRunConfig(
      "# run\ndataset_root = data\nsplit_csv = /abs/split.csv\npredictions = preds\n"
      "output_dir = out\nmodels = pix2pix, cddpm3\nscale = hu\nseed = 12\njobs = 3\n"
      "ssim_sigma = 2.0\n",
      "/base");
  EXPECT_EQ(c.dataset_root, fs::path("/base/data"));
  EXPECT_EQ(c.split_csv, fs::path("/abs/split.csv"));
  EXPECT_EQ(c.models, (std::vector<std::string>{"pix2pix", "cddpm3"}));
  EXPECT_EQ(c.scale, MetricScale::kHounsfield);
  EXPECT_EQ(c.peak(), 3000.0);
  EXPECT_EQ(c.seed, 12u);
  EXPECT_EQ(c.jobs, 3u);
  EXPECT_EQ(c.ssim.sigma, 2.0);
  EXPECT_EQ(c.embedder, "block-mean-8");
  EXPECT_EQ(c.seg_fraction, 0.5);
}

TEST(RunConfigTest, Errors) {
  const std::string base =
      "dataset_root=a\nsplit_csv=b\npredictions=c\noutput_dir=d\nmodels=m\n";
  const auto code = [](const std::string& text) {
    try {
      ParseRunConfig(text, "/");
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kUsage;
  };
  EXPECT_EQ(code(base + "colour=red\n"), ErrorCode::kConfig);
  EXPECT_EQ(code("dataset_root=a\n"), ErrorCode::kConfig);
  EXPECT_EQ(code(base + "seed=-1\n"), ErrorCode::kConfig);
  EXPECT_EQ(code(base + "scale=percent\n"), ErrorCode::kConfig);
  EXPECT_EQ(code(base + "no equals sign\n"), ErrorCode::kConfig);
  // Paths that do not exist fail validation.
  try {
    ValidateRunConfig(ParseRunConfig(base, "/nonexistent"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST(RunConfigTest, CanonicalTextExcludesJobsAndOutput) {
  const std::string base =
      "dataset_root=a\nsplit_csv=b\npredictions=c\nmodels=m\n";
  const auto a = ParseRunConfig(base + "output_dir=x\njobs=1\n", "/");
  const auto b = ParseRunConfig(base + "output_dir=y\njobs=8\n", "/");
  EXPECT_EQ(CanonicalConfigText(a), CanonicalConfigText(b));
  const auto c = ParseRunConfig(base + "output_dir=x\nseed=1\n", "/");
  EXPECT_NE(CanonicalConfigText(a), CanonicalConfigText(c));
}

class EvaluateTest : public ::testing::Test {
 protected:
  // Three test patients p0..p2 of 16x16x4; "exact" predicts the CT itself
  // in HU, "noisy" adds noise in normalized units.
  void SetUp() override {
    root_ = testing::ScratchDir("evaluate");
    std::string split = "patient_id,split\n";
    for (int i = 0; i < 3; ++i) {
      testing::SyntheticPatient p;
      p.id = "p" + std::to_string(i);
      p.ct = testing::PhantomCt(testing::MakeGeometry(16, 16, 4), 100 + i);
      p.mri = testing::PhantomMri(p.ct);
      testing::WritePatient(root_ / "data", p);
      testing::WritePrediction(root_ / "preds", "exact", p.id, p.ct, i == 1, &p.ct);
      std::mt19937_64 rng(i);
      const Volume noisy = testing::AddNoise(PreprocessCt(p.ct), 0.05, rng);
      testing::WritePrediction(root_ / "preds", "noisy", p.id, noisy, false, nullptr);
      split += p.id + ",test\n";
      cts_.push_back(p.ct);
    }
    split += "q9,train\n";
    testing::WriteFile(root_ / "split.csv", split);
  }

  RunConfig Config(const std::vector<std::string>& models, const std::string& extra = "") {
    return ParseRunConfig(testing::ConfigText(root_ / "data", root_ / "split.csv",
                                              root_ / "preds", root_ / "out", models, extra),
                          root_);
  }

  fs::path root_;
  std::vector<Volume> cts_;
};

TEST_F(EvaluateTest, IdentityRunIsFixedPoint) {
  const MetricReport r = EvaluateRun(Config({"exact"}, "prediction_scale = hu\nseg_fraction = 1\n"));
  ASSERT_EQ(r.models.size(), 1u);
  const ModelReport& m = r.models[0];
  EXPECT_TRUE(m.exclusions.empty());
  EXPECT_EQ(m.patients.size(), 3u);
  EXPECT_EQ(m.ssim.mean, 1.0);
  EXPECT_EQ(m.mae.mean, 0.0);
  EXPECT_EQ(m.mse.mean, 0.0);
  EXPECT_EQ(m.simos.mean, 0.0);
  EXPECT_TRUE(std::isinf(m.psnr.mean));
  EXPECT_LE(m.fid, 1e-6);
  EXPECT_EQ(m.fid_slices, 12u);
  EXPECT_EQ(m.iou_3d.mean, 1.0);
  EXPECT_EQ(m.iou_2d.mean, 1.0);
  EXPECT_EQ(m.iou_3d.n, 3u);
  EXPECT_EQ(r.provenance.test_patients, (std::vector<std::string>{"p0", "p1", "p2"}));
  EXPECT_EQ(r.provenance.seg_subset.size(), 3u);
}

TEST_F(EvaluateTest, SegSubsetLimitsIou) {
  const MetricReport r = EvaluateRun(Config({"exact"}, "prediction_scale = hu\n"));
  EXPECT_EQ(r.provenance.seg_subset.size(), 2u);
  EXPECT_EQ(r.models[0].iou_3d.n, 2u);
  std::size_t with_iou = 0;
  for (const auto& p : r.models[0].patients) with_iou += p.iou_3d.has_value();
  EXPECT_EQ(with_iou, 2u);
}

TEST_F(EvaluateTest, NoisyIsWorseAndHuScaleIsConsistent) {
  const ModelReport n = EvaluateRun(Config({"noisy"})).models[0];
  EXPECT_LT(n.ssim.mean, 1.0);
  EXPECT_GT(n.mae.mean, 0.0);
  EXPECT_GT(n.fid, 0.0);
  EXPECT_GT(n.simos.mean, 0.0);
  EXPECT_TRUE(std::isnan(n.iou_3d.mean));
  const ModelReport h = EvaluateRun(Config({"noisy"}, "scale = hu\n")).models[0];
  EXPECT_NEAR(h.mae.mean, 3000.0 * n.mae.mean, 1e-6);
  EXPECT_NEAR(h.psnr.mean, n.psnr.mean, 1e-6);
  // The HU offset changes the luminance term, so SSIM is scale dependent.
  EXPECT_GT(h.ssim.mean, 0.0);
  EXPECT_LT(h.ssim.mean, 1.0);
}

TEST_F(EvaluateTest, MissingPredictionIsExcluded) {
  fs::remove_all(root_ / "preds" / "noisy" / "p2");
  const ModelReport m = EvaluateRun(Config({"noisy"})).models[0];
  ASSERT_EQ(m.exclusions.size(), 1u);
  EXPECT_EQ(m.exclusions[0].patient_id, "p2");
  EXPECT_EQ(m.exclusions[0].code, "io");
  EXPECT_EQ(m.patients.size(), 2u);
  EXPECT_EQ(m.ssim.n, 2u);
  EXPECT_EQ(m.fid_slices, 8u);
  // Aggregates equal those over the two remaining patients.
  EXPECT_DOUBLE_EQ(m.mae.mean, (m.patients[0].mae + m.patients[1].mae) / 2.0);
}

TEST_F(EvaluateTest, JobsDoNotChangeResults) {
  const auto one = RenderReport(EvaluateRun(Config({"exact", "noisy"}, "jobs = 1\n")),
                                ReportFormat::kJson);
  const auto four = RenderReport(EvaluateRun(Config({"exact", "noisy"}, "jobs = 4\n")),
                                 ReportFormat::kJson);
  EXPECT_EQ(one, four);
}

TEST_F(EvaluateTest, ExternalEmbeddings) {
  EmbeddingSet gt(2, {0, 0, 1, 0, 0, 1, 1, 1}, "external");
  EmbeddingSet pred(2, {1, 0, 2, 0, 1, 1, 2, 1}, "external");
  WriteEmbeddingFile(gt, root_ / "gt_emb.bin");
  WriteEmbeddingFile(pred, root_ / "preds" / "noisy" / "embeddings.bin");
  const ModelReport m =
      EvaluateRun(Config({"noisy"}, "embedder = external\ngt_embeddings = gt_emb.bin\n")).models[0];
  // Same covariance, mean shift (1, 0).
  EXPECT_NEAR(m.fid, 1.0, 1e-9);
  EXPECT_EQ(m.fid_slices, 4u);
}

TEST(PredictionScaleTest, ClampsAndRejectsNonFinite) {
  RunConfig c;
  const auto g = testing::MakeGeometry(3, 1, 1);
  const Volume v = PredictionToMetricScale(
      Volume(g, ValueKind::kRawIntensity, {-0.5, 0.25, 1.5}), c);
  EXPECT_EQ(v.voxels()[0], 0.0);
  EXPECT_EQ(v.voxels()[1], 0.25);
  EXPECT_EQ(v.voxels()[2], 1.0);
  try {
    PredictionToMetricScale(Volume(g, ValueKind::kRawIntensity, {0.0, NAN, 0.0}), c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNumeric);
  }
}

}  // namespace
}  // namespace sctk
