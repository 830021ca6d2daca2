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

// End-to-end evaluation of synthetic CT predictions.
//
// Prediction layout, per model and test patient:
//
//   <predictions>/<model>/<id>/sct.nii.gz       full restacked volume, or
//   <predictions>/<model>/<id>/slices/index.csv "z,file" rows, one NIfTI
//                                               slice (nz = 1) per row
//   <predictions>/<model>/<id>/mask.nii.gz      optional 3D segmentation
//   <predictions>/<model>/<id>/mask2d.nii.gz    optional per-slice 2D masks
//   <predictions>/<model>/embeddings.bin        with embedder = external
//
// Ground-truth masks live next to the CT as mask.nii.gz / mask2d.nii.gz,
// each with a .labels.tsv sidecar.
//
// Aggregation order: SSIM, PSNR, MAE and MSE per slice, averaged per
// patient, then mean and std over patients. SIMOS and 3D IoU per restacked
// volume. FID once per model over the pooled slice embeddings of all
// evaluated patients. IoU only on the deterministic seg_fraction subset of
// the test set.

#ifndef SCTK_EVALUATE_H_
#define SCTK_EVALUATE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sctk/config.h"
#include "sctk/embedding.h"
#include "sctk/stats.h"
#include "sctk/volume.h"

namespace sctk {

struct PatientMetrics {
  std::string patient_id;
  double ssim = 0.0;
  double psnr = 0.0;
  double mae = 0.0;
  double mse = 0.0;
  double simos = 0.0;
  std::optional<double> iou_2d;
  std::optional<double> iou_3d;
  std::vector<double> slice_ssim;
  std::vector<double> slice_psnr;
};

struct PatientExclusion {
  std::string patient_id;
  std::string code;
  std::string reason;
};

// One row of the report.
struct ModelReport {
  std::string model;
  MeanStd ssim;
  MeanStd psnr;
  MeanStd mae;
  MeanStd mse;
  MeanStd simos;
  MeanStd iou_2d;
  MeanStd iou_3d;
  double fid = 0.0;
  std::size_t fid_slices = 0;
  // Alternative aggregates: per-slice pooled means and per-label pooled IoU.
  double ssim_slice_pooled = 0.0;
  double psnr_slice_pooled = 0.0;
  double iou_2d_label_pooled = 0.0;
  double iou_3d_label_pooled = 0.0;
  std::vector<PatientMetrics> patients;
  std::vector<PatientExclusion> exclusions;
};

struct Provenance {
  std::string toolkit_version;
  std::string config_hash;
  std::string dataset_hash;
  std::string scale;
  std::uint64_t seed = 0;
  std::string embedder;
  double seg_fraction = 0.0;
  std::vector<std::string> test_patients;
  std::vector<std::string> seg_subset;
};

struct MetricReport {
  Provenance provenance;
  std::vector<ModelReport> models;
};

std::string ToolkitVersion();

// Brings ground truth HU into the metric scale (normalized, or HU clamped
// to [ct_floor, ct_cap]).
Volume GroundTruthToMetricScale(const Volume& ct_hu, const RunConfig& config);

// Brings a prediction stored in config.prediction_scale into the metric
// scale. Values outside the storage range are clamped to it first.
Volume PredictionToMetricScale(const Volume& prediction, const RunConfig& config);

// Loads sct.nii[.gz] or restacks slices/index.csv onto `gt_geometry`.
Volume LoadPrediction(const std::filesystem::path& patient_dir,
                      const VolumeGeometry& gt_geometry);

// Per-slice and per-volume metrics for one patient in metric scale.
PatientMetrics ComputePatientMetrics(const std::string& patient_id, const Volume& gt,
                                     const Volume& pred, const RunConfig& config);

// Evaluates one model over the test split and aggregates its row.
ModelReport EvaluateModel(const RunConfig& config, const std::string& model_name);

// Evaluates every configured model and fills provenance.
MetricReport EvaluateRun(const RunConfig& config);

// Per-patient metrics as CSV, one row per evaluated patient.
std::string PatientMetricsCsv(const ModelReport& row);

}  // namespace sctk

#endif  // SCTK_EVALUATE_H_
