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

#include "sctk/simos.h"

#include <cmath>
#include <string>

#include "sctk/error.h"
#include "sctk/pixel_metrics.h"

namespace sctk {

std::vector<double> ConsecutiveSliceMse(const Volume& volume) {
  const std::size_t nz = volume.dims().nz;
  std::vector<double> out;
  if (nz < 2) return out;
  out.reserve(nz - 1);
  for (std::size_t z = 0; z + 1 < nz; ++z) {
    out.push_back(MeanSquaredError(volume.plane(z), volume.plane(z + 1)));
  }
  return out;
}

double Simos(const Volume& gt, const Volume& syn) {
  if (gt.dims() != syn.dims()) {
    Fail(ErrorCode::kDimension, "SIMOS volumes have different shapes");
  }
  if (gt.dims().nz < 2) {
    Fail(ErrorCode::kDegenerateInput,
         "SIMOS needs at least 2 slices, got " + std::to_string(gt.dims().nz));
  }
  const auto gt_profile = ConsecutiveSliceMse(gt);
  const auto syn_profile = ConsecutiveSliceMse(syn);
  double sum = 0.0;
  for (std::size_t i = 0; i < gt_profile.size(); ++i) {
    sum += std::abs(gt_profile[i] - syn_profile[i]);
  }
  return sum / static_cast<double>(gt_profile.size());
}

}  // namespace sctk
