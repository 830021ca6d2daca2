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

// Evaluation of externally produced label masks.
//
// Masks are NIfTI integer volumes with a sidecar label map next to them:
// for `mask.nii.gz` the label map is `mask.labels.tsv`, one "id<TAB>name"
// line per label. Labels are matched across volumes by name, so two
// segmentor runs that number their labels differently still compare.

#ifndef SCTK_SEG_EVAL_H_
#define SCTK_SEG_EVAL_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sctk/volume.h"

namespace sctk {

using LabelId = std::uint16_t;

struct LabelMaskVolume {
  VolumeGeometry geometry;
  std::vector<LabelId> labels;  // 0 = background
  std::map<LabelId, std::string> label_names;

  // Voxel count matches geometry, every non-zero label is named, and names
  // are unique.
  void Validate() const;
};

// Lines of "id<TAB>name"; a space also separates when no tab is present.
// Blank lines and lines starting with '#' are skipped.
std::map<LabelId, std::string> ParseLabelMap(std::string_view text);
std::string LabelMapToTsv(const std::map<LabelId, std::string>& names);

// mask.nii.gz -> mask.labels.tsv
std::filesystem::path LabelMapPathFor(const std::filesystem::path& mask_path);

LabelMaskVolume ReadLabelMask(const std::filesystem::path& nifti_path,
                              const std::filesystem::path& label_map_path);
LabelMaskVolume ReadLabelMask(const std::filesystem::path& nifti_path);
void WriteLabelMask(const LabelMaskVolume& mask, const std::filesystem::path& nifti_path);

// Deterministic selection of ceil(fraction * n) ids, returned sorted. The
// result depends only on the set of ids, fraction and seed.
std::vector<std::string> SelectEvalSubset(std::span<const std::string> ids,
                                          double fraction, std::uint64_t seed);

struct LabelIou {
  std::string name;
  double iou = 0.0;
  friend bool operator==(const LabelIou&, const LabelIou&) = default;
};

struct MeanIouResult {
  double mean = 1.0;
  std::vector<LabelIou> per_label;  // sorted by name
};

// Binary IoU for every named label with at least one voxel in either
// volume, averaged over those labels. Volumes with no foreground at all
// agree perfectly (mean 1.0, no per-label entries).
MeanIouResult MeanLabelIou(const LabelMaskVolume& gt, const LabelMaskVolume& syn);

// Plane z as a one-slice mask volume.
LabelMaskVolume TransverseMaskSlice(const LabelMaskVolume& mask, std::size_t z);

// 2D evaluation: MeanLabelIou on each transverse plane (as an nz = 1
// volume), averaged over planes with foreground in either mask. Returns the
// per-plane results in plane order.
std::vector<MeanIouResult> PerSliceLabelIou(const LabelMaskVolume& gt,
                                            const LabelMaskVolume& syn);
MeanIouResult MeanSliceIou(const LabelMaskVolume& gt, const LabelMaskVolume& syn);

// Cohort aggregates: mean/std over patients of each patient's label mean,
// and the pooled mean over every (patient, label) entry.
struct CohortIou {
  std::size_t patients = 0;
  double patient_mean = 0.0;
  double patient_std = 0.0;
  double pooled_label_mean = 0.0;
};
CohortIou AggregateCohortIou(std::span<const MeanIouResult> per_patient);

}  // namespace sctk

#endif  // SCTK_SEG_EVAL_H_
