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

#include "sctk/preprocess.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sctk/error.h"

namespace sctk {
namespace {

void RequireKind(const Volume& v, ValueKind expected, const char* op) {
  if (v.kind() != expected) {
    Fail(ErrorCode::kInvalidArgument,
         std::string(op) + " expects a " + std::string(ValueKindName(expected)) +
             " volume, got " + std::string(ValueKindName(v.kind())));
  }
}

}  // namespace

void NormalizationParams::Validate() const {
  if (!(ct_floor < ct_cap) || !std::isfinite(ct_floor) || !std::isfinite(ct_cap)) {
    Fail(ErrorCode::kInvalidArgument, "ct_floor must be below ct_cap");
  }
  if (!(mri_percentile > 0.0 && mri_percentile < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "mri_percentile must lie in (0, 1)");
  }
}

Volume PreprocessCt(const Volume& hu, const NormalizationParams& params) {
  params.Validate();
  RequireKind(hu, ValueKind::kHounsfield, "PreprocessCt");
  const double range = params.ct_cap - params.ct_floor;
  std::vector<double> out(hu.voxels().begin(), hu.voxels().end());
  for (double& v : out) {
    const double u = (std::min(v, params.ct_cap) - params.ct_floor) / range;
    v = std::clamp(u, 0.0, 1.0);
  }
  return Volume(hu.geometry(), ValueKind::kNormalized, std::move(out));
}

Volume DenormalizeCt(const Volume& normalized, const NormalizationParams& params) {
  params.Validate();
  RequireKind(normalized, ValueKind::kNormalized, "DenormalizeCt");
  const double range = params.ct_cap - params.ct_floor;
  std::vector<double> out(normalized.voxels().begin(), normalized.voxels().end());
  for (double& u : out) u = u * range + params.ct_floor;
  return Volume(normalized.geometry(), ValueKind::kHounsfield, std::move(out));
}

double NearestRankPercentile(std::span<const double> values, double p) {
  if (values.empty()) {
    Fail(ErrorCode::kInsufficientData, "percentile of an empty set");
  }
  const double n = static_cast<double>(values.size());
  // The 1e-9 slack keeps ceil(0.98 * 100) at 98 despite binary rounding.
  auto rank = static_cast<std::size_t>(std::ceil(p * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  std::vector<double> sorted(values.begin(), values.end());
  std::nth_element(sorted.begin(), sorted.begin() + (rank - 1), sorted.end());
  return sorted[rank - 1];
}

Volume PreprocessMri(const Volume& raw, const NormalizationParams& params) {
  params.Validate();
  RequireKind(raw, ValueKind::kRawIntensity, "PreprocessMri");
  const auto voxels = raw.voxels();
  if (voxels.empty()) Fail(ErrorCode::kInsufficientData, "empty MRI volume");
  const double cap = NearestRankPercentile(voxels, params.mri_percentile);
  const double lo = std::min(*std::min_element(voxels.begin(), voxels.end()), cap);
  const double range = cap - lo;
  std::vector<double> out(voxels.size(), 0.0);
  if (range > 0.0) {
    for (std::size_t i = 0; i < voxels.size(); ++i) {
      out[i] = std::clamp((std::min(voxels[i], cap) - lo) / range, 0.0, 1.0);
    }
  }
  return Volume(raw.geometry(), ValueKind::kNormalized, std::move(out));
}

std::vector<std::size_t> MultichannelIndices(std::size_t center,
                                             std::size_t count, std::size_t k) {
  if (k == 0 || k % 2 == 0) {
    Fail(ErrorCode::kInvalidArgument,
         "channel count k must be odd and >= 1, got " + std::to_string(k));
  }
  if (center >= count) {
    Fail(ErrorCode::kDimension, "center index out of range");
  }
  const auto half = static_cast<std::ptrdiff_t>(k / 2);
  const auto last = static_cast<std::ptrdiff_t>(count) - 1;
  std::vector<std::size_t> indices;
  indices.reserve(k);
  for (std::ptrdiff_t off = -half; off <= half; ++off) {
    const std::ptrdiff_t z = static_cast<std::ptrdiff_t>(center) + off;
    indices.push_back(static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(z, 0, last)));
  }
  return indices;
}

std::vector<MultiChannelSlice> BuildMultichannel(std::span<const Slice> mri,
                                                 std::span<const Slice> ct,
                                                 std::size_t k) {
  if (mri.size() != ct.size()) {
    Fail(ErrorCode::kPairing, "MRI has " + std::to_string(mri.size()) +
                                  " slices but CT has " +
                                  std::to_string(ct.size()));
  }
  if (mri.empty()) Fail(ErrorCode::kPairing, "no slices to pair");
  std::vector<MultiChannelSlice> items;
  items.reserve(mri.size());
  for (std::size_t i = 0; i < mri.size(); ++i) {
    MultiChannelSlice item;
    item.center_index = i;
    for (std::size_t z : MultichannelIndices(i, mri.size(), k)) {
      item.channels.push_back(mri[z]);
    }
    item.target = ct[i];
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace sctk
