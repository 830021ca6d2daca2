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

#ifndef SCTK_PREPROCESS_H_
#define SCTK_PREPROCESS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "sctk/volume.h"

namespace sctk {

struct NormalizationParams {
  double ct_floor = -1000.0;  // HU, population minimum
  double ct_cap = 2000.0;     // HU, upper limit
  double mri_percentile = 0.98;

  // Requires ct_floor < ct_cap and 0 < mri_percentile < 1.
  void Validate() const;
};

// CT: v -> (min(v, cap) - floor) / (cap - floor), clamped to [0, 1]. Values
// below the floor map to 0.
Volume PreprocessCt(const Volume& hu, const NormalizationParams& params = {});

// Inverse affine map u -> u * (cap - floor) + floor.
Volume DenormalizeCt(const Volume& normalized,
                     const NormalizationParams& params = {});

// MRI: caps intensities above this image's percentile value, then min-max
// scales to [0, 1] with this image's min and capped max. Constant images map
// to zeros.
Volume PreprocessMri(const Volume& raw, const NormalizationParams& params = {});

// Nearest-rank percentile: the ceil(p * n)-th smallest value (1-based),
// clamped to [1, n]. Throws kInsufficientData on empty input.
double NearestRankPercentile(std::span<const double> values, double p);

// A conditioning input of k consecutive source slices (indices clamped at
// the volume boundary) centred on center_index, paired with the target
// slice at center_index.
struct MultiChannelSlice {
  std::vector<Slice> channels;
  std::size_t center_index = 0;
  Slice target;
};

// One item per input slice. k must be odd and >= 1; the slice lists must
// have equal, non-zero length (kPairing otherwise).
std::vector<MultiChannelSlice> BuildMultichannel(std::span<const Slice> mri,
                                                 std::span<const Slice> ct,
                                                 std::size_t k);

// The source indices selected for item `center` out of `count` slices.
std::vector<std::size_t> MultichannelIndices(std::size_t center,
                                             std::size_t count, std::size_t k);

}  // namespace sctk

#endif  // SCTK_PREPROCESS_H_
