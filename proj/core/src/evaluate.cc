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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "sctk/dataset.h"
#include "sctk/error.h"
#include "sctk/frechet.h"
#include "sctk/nifti.h"
#include "sctk/pixel_metrics.h"
#include "sctk/preprocess.h"
#include "sctk/rng.h"
#include "sctk/seg_eval.h"
#include "sctk/simos.h"
#include "sctk/slices.h"
#include "sctk/ssim.h"

#ifndef SCTK_VERSION_STRING
#define SCTK_VERSION_STRING "0.0.0"
#endif

namespace sctk {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct TestSet {
  std::vector<PatientRecord> records;  // sorted by id
  std::vector<PatientExclusion> missing;
  std::vector<std::string> seg_subset;
};

TestSet LoadTestSet(const RunConfig& config) {
  const Manifest manifest = BuildManifest(config.dataset_root);
  const auto split = ReadSplitCsv(config.split_csv);
  std::map<std::string, const PatientRecord*> by_id;
  for (const auto& r : manifest.records) by_id[r.patient_id] = &r;

  TestSet set;
  std::vector<std::string> ids;
  for (const auto& [id, s] : split) {
    if (s != Split::kTest) continue;
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      set.missing.push_back({id, "pairing", "test patient not in dataset manifest"});
      continue;
    }
    set.records.push_back(*it->second);
    ids.push_back(id);
  }
  if (!ids.empty()) set.seg_subset = SelectEvalSubset(ids, config.seg_fraction, config.seed);
  return set;
}

std::string Hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct PatientOutcome {
  std::optional<PatientMetrics> metrics;
  std::optional<PatientExclusion> exclusion;
  EmbeddingSet gt_embeddings;
  EmbeddingSet pred_embeddings;
};

struct IouDetail {
  std::optional<MeanIouResult> iou_3d;
  std::optional<MeanIouResult> iou_2d;
};

PatientOutcome EvaluatePatient(const RunConfig& config, const std::string& model,
                               const PatientRecord& record, bool in_seg_subset,
                               const Embedder* embedder, IouDetail& iou) {
  PatientOutcome out;
  const auto pred_dir = config.predictions_dir / model / record.patient_id;
  try {
    const Volume ct = ReadNifti(record.ct_path, ValueKind::kHounsfield);
    const Volume gt = GroundTruthToMetricScale(ct, config);
    const Volume pred = PredictionToMetricScale(LoadPrediction(pred_dir, ct.geometry()), config);
    PatientMetrics metrics = ComputePatientMetrics(record.patient_id, gt, pred, config);
    if (in_seg_subset) {
      const auto gt_dir = record.ct_path.parent_path();
      const auto gt3 = record.mask_path;
      const auto pred3 = FindNifti(pred_dir, "mask");
      if (gt3 && pred3) {
        iou.iou_3d = MeanLabelIou(ReadLabelMask(*gt3), ReadLabelMask(*pred3));
        metrics.iou_3d = iou.iou_3d->mean;
      }
      const auto gt2 = FindNifti(gt_dir, "mask2d");
      const auto pred2 = FindNifti(pred_dir, "mask2d");
      if (gt2 && pred2) {
        iou.iou_2d = MeanSliceIou(ReadLabelMask(*gt2), ReadLabelMask(*pred2));
        metrics.iou_2d = iou.iou_2d->mean;
      }
    }
    if (embedder != nullptr) {
      const auto gt_slices = ExtractTransverseSlices(gt);
      const auto pred_slices = ExtractTransverseSlices(pred);
      out.gt_embeddings = EmbedSlices(gt_slices, *embedder);
      out.pred_embeddings = EmbedSlices(pred_slices, *embedder);
    }
    out.metrics = std::move(metrics);
  } catch (const Error& e) {
    out.exclusion = PatientExclusion{record.patient_id, std::string(ErrorCodeName(e.code())),
                                     e.what()};
    iou = {};
  }
  return out;
}

template <typename Fn>
void ParallelFor(std::size_t count, std::size_t jobs, Fn&& fn) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

}  // namespace

std::string ToolkitVersion() { return SCTK_VERSION_STRING; }

Volume GroundTruthToMetricScale(const Volume& ct_hu, const RunConfig& config) {
  const Volume normalized = PreprocessCt(ct_hu, config.normalization);
  if (config.scale == MetricScale::kNormalized) return normalized;
  return DenormalizeCt(normalized, config.normalization);
}

Volume PredictionToMetricScale(const Volume& prediction, const RunConfig& config) {
  const auto& n = config.normalization;
  std::vector<double> values(prediction.voxels().begin(), prediction.voxels().end());
  for (double v : values) {
    if (!std::isfinite(v)) Fail(ErrorCode::kNumeric, "prediction has non-finite voxels");
  }
  Volume normalized;
  if (config.prediction_scale == MetricScale::kNormalized) {
    for (double& v : values) v = std::clamp(v, 0.0, 1.0);
    normalized = Volume(prediction.geometry(), ValueKind::kNormalized, std::move(values));
  } else {
    for (double& v : values) v = std::clamp(v, n.ct_floor, n.ct_cap);
    normalized = PreprocessCt(
        Volume(prediction.geometry(), ValueKind::kHounsfield, std::move(values)), n);
  }
  if (config.scale == MetricScale::kNormalized) return normalized;
  return DenormalizeCt(normalized, n);
}

Volume LoadPrediction(const std::filesystem::path& patient_dir,
                      const VolumeGeometry& gt_geometry) {
  const auto kind = ValueKind::kRawIntensity;
  if (const auto full = FindNifti(patient_dir, "sct")) {
    Volume v = ReadNifti(*full, kind);
    if (v.dims() != gt_geometry.dims) {
      Fail(ErrorCode::kDimension, "prediction dims differ from ground truth");
    }
    // Restack onto the ground-truth geometry so metadata is authoritative.
    return Volume(gt_geometry, kind, std::vector<double>(v.voxels().begin(), v.voxels().end()));
  }
  const auto index_path = patient_dir / "slices" / "index.csv";
  if (!std::filesystem::is_regular_file(index_path)) {
    Fail(ErrorCode::kIo, "no prediction (sct.nii[.gz] or slices/index.csv) in " +
                             patient_dir.string());
  }
  return StackSlices(ReadSliceStack(index_path), gt_geometry, kind);
}

PatientMetrics ComputePatientMetrics(const std::string& patient_id, const Volume& gt,
                                     const Volume& pred, const RunConfig& config) {
  if (gt.dims() != pred.dims()) {
    Fail(ErrorCode::kDimension, "prediction dims differ from ground truth");
  }
  SsimParams ssim = config.ssim;
  ssim.dynamic_range = config.peak();
  PatientMetrics m;
  m.patient_id = patient_id;
  std::vector<double> mae, mse;
  for (std::size_t z = 0; z < gt.dims().nz; ++z) {
    const Slice g = ExtractTransverseSlice(gt, z);
    const Slice p = ExtractTransverseSlice(pred, z);
    const PixelMetrics px = ComputePixelMetrics(p, g, config.peak());
    mae.push_back(px.mae);
    mse.push_back(px.mse);
    m.slice_psnr.push_back(px.psnr);
    m.slice_ssim.push_back(Ssim(p, g, ssim));
  }
  m.mae = Mean(mae);
  m.mse = Mean(mse);
  m.psnr = Mean(m.slice_psnr);
  m.ssim = Mean(m.slice_ssim);
  m.simos = Simos(gt, pred);
  return m;
}

ModelReport EvaluateModel(const RunConfig& config, const std::string& model_name) {
  const TestSet test = LoadTestSet(config);
  const std::set<std::string> seg(test.seg_subset.begin(), test.seg_subset.end());

  std::unique_ptr<Embedder> embedder;
  if (config.embedder != kExternalEmbedder) embedder = MakeEmbedder(config.embedder);

  const std::size_t n = test.records.size();
  std::vector<PatientOutcome> outcomes(n);
  std::vector<IouDetail> iou(n);
  ParallelFor(n, config.jobs, [&](std::size_t i) {
    const auto& rec = test.records[i];
    outcomes[i] = EvaluatePatient(config, model_name, rec, seg.contains(rec.patient_id),
                                  embedder.get(), iou[i]);
  });

  ModelReport row;
  row.model = model_name;
  row.exclusions = test.missing;
  std::vector<double> ssim, psnr, mae, mse, simos, iou2, iou3, slice_ssim, slice_psnr;
  std::vector<MeanIouResult> iou2_detail, iou3_detail;
  EmbeddingSet gt_pool, pred_pool;
  for (std::size_t i = 0; i < n; ++i) {
    auto& o = outcomes[i];
    if (o.exclusion) {
      row.exclusions.push_back(*o.exclusion);
      continue;
    }
    const PatientMetrics& m = *o.metrics;
    ssim.push_back(m.ssim);
    psnr.push_back(m.psnr);
    mae.push_back(m.mae);
    mse.push_back(m.mse);
    simos.push_back(m.simos);
    slice_ssim.insert(slice_ssim.end(), m.slice_ssim.begin(), m.slice_ssim.end());
    slice_psnr.insert(slice_psnr.end(), m.slice_psnr.begin(), m.slice_psnr.end());
    if (iou[i].iou_2d) {
      iou2.push_back(iou[i].iou_2d->mean);
      iou2_detail.push_back(*iou[i].iou_2d);
    }
    if (iou[i].iou_3d) {
      iou3.push_back(iou[i].iou_3d->mean);
      iou3_detail.push_back(*iou[i].iou_3d);
    }
    if (embedder) {
      if (gt_pool.dim() == 0) {
        gt_pool = o.gt_embeddings;
        pred_pool = o.pred_embeddings;
      } else {
        gt_pool.Extend(o.gt_embeddings);
        pred_pool.Extend(o.pred_embeddings);
      }
    }
    row.patients.push_back(m);
  }
  std::sort(row.exclusions.begin(), row.exclusions.end(),
            [](const auto& a, const auto& b) { return a.patient_id < b.patient_id; });

  row.ssim = Summarize(ssim);
  row.psnr = Summarize(psnr);
  row.mae = Summarize(mae);
  row.mse = Summarize(mse);
  row.simos = Summarize(simos);
  row.iou_2d = Summarize(iou2);
  row.iou_3d = Summarize(iou3);
  if (iou2.empty()) row.iou_2d.mean = kNaN;
  if (iou3.empty()) row.iou_3d.mean = kNaN;
  row.ssim_slice_pooled = slice_ssim.empty() ? kNaN : Mean(slice_ssim);
  row.psnr_slice_pooled = slice_psnr.empty() ? kNaN : Mean(slice_psnr);
  row.iou_2d_label_pooled = iou2_detail.empty() ? kNaN : AggregateCohortIou(iou2_detail).pooled_label_mean;
  row.iou_3d_label_pooled = iou3_detail.empty() ? kNaN : AggregateCohortIou(iou3_detail).pooled_label_mean;

  if (!embedder) {
    gt_pool = ReadEmbeddingFile(*config.gt_embeddings);
    pred_pool = ReadEmbeddingFile(config.predictions_dir / model_name / "embeddings.bin");
  }
  row.fid_slices = pred_pool.count();
  if (gt_pool.count() >= 2 && pred_pool.count() >= 2) {
    row.fid = FrechetDistance(FitGaussian(gt_pool), FitGaussian(pred_pool));
  } else {
    row.fid = kNaN;
  }
  if (row.patients.empty()) {
    for (MeanStd* s : {&row.ssim, &row.psnr, &row.mae, &row.mse, &row.simos}) s->mean = kNaN;
  }
  return row;
}

MetricReport EvaluateRun(const RunConfig& config) {
  ValidateRunConfig(config);
  MetricReport report;
  Provenance& p = report.provenance;
  p.toolkit_version = ToolkitVersion();
  p.config_hash = Hex64(Fnv1a64(CanonicalConfigText(config)));
  p.scale = std::string(MetricScaleName(config.scale));
  p.seed = config.seed;
  p.embedder = config.embedder;
  p.seg_fraction = config.seg_fraction;

  const TestSet test = LoadTestSet(config);
  std::uint64_t h = Fnv1a64("sctk-dataset");
  for (const auto& rec : test.records) {
    p.test_patients.push_back(rec.patient_id);
    h = Fnv1a64(rec.patient_id, h);
    const auto bytes = ReadFileBytes(rec.ct_path);
    h = Fnv1a64(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), h);
  }
  p.dataset_hash = Hex64(h);
  p.seg_subset = test.seg_subset;

  for (const auto& model : config.models) {
    report.models.push_back(EvaluateModel(config, model));
  }
  return report;
}

}  // namespace sctk
