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

// Run configuration for `sctk eval`.
//
// The file is key = value lines ('#' comments). Relative paths resolve
// against the directory holding the config file.
//
//   dataset_root      = data            # required
//   split_csv         = split.csv       # required, patient_id,split
//   predictions       = preds           # required, <predictions>/<model>/<id>/...
//   output_dir        = out             # required
//   models            = cddpm3, cgan1   # required, comma separated
//   scale             = normalized      # normalized | hu
//   prediction_scale  = normalized      # scale the sCT files are stored in
//   ct_floor          = -1000
//   ct_cap            = 2000
//   mri_percentile    = 0.98
//   ssim_window       = 11
//   ssim_sigma        = 1.5
//   ssim_k1           = 0.01
//   ssim_k2           = 0.03
//   embedder          = block-mean-8    # or "external"
//   gt_embeddings     = gt.bin          # required when embedder = external
//   seed              = 0
//   seg_fraction      = 0.5
//   jobs              = 1

#ifndef SCTK_CONFIG_H_
#define SCTK_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sctk/preprocess.h"
#include "sctk/ssim.h"

namespace sctk {

enum class MetricScale { kNormalized, kHounsfield };

std::string_view MetricScaleName(MetricScale scale);
MetricScale ParseMetricScale(std::string_view text);

inline constexpr std::string_view kExternalEmbedder = "external";

struct RunConfig {
  std::filesystem::path dataset_root;
  std::filesystem::path split_csv;
  std::filesystem::path predictions_dir;
  std::filesystem::path output_dir;
  std::vector<std::string> models;
  NormalizationParams normalization;
  MetricScale scale = MetricScale::kNormalized;
  MetricScale prediction_scale = MetricScale::kNormalized;
  SsimParams ssim;
  std::string embedder = "block-mean-8";
  std::optional<std::filesystem::path> gt_embeddings;
  std::uint64_t seed = 0;
  double seg_fraction = 0.5;
  std::size_t jobs = 1;

  // PSNR peak and SSIM dynamic range follow the metric scale.
  double peak() const;
};

// Throws kConfig on unknown keys, missing required keys or bad values.
RunConfig ParseRunConfig(std::string_view text, const std::filesystem::path& base_dir);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Checks that referenced inputs exist and parameters are in range.
void ValidateRunConfig(const RunConfig& config);

// Stable text form of everything that affects metric values; hashed into
// report provenance. Output directory and job count are excluded.
std::string CanonicalConfigText(const RunConfig& config);

}  // namespace sctk

#endif  // SCTK_CONFIG_H_
