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

#ifndef SCTK_SIMOS_H_
#define SCTK_SIMOS_H_

#include <vector>

#include "sctk/volume.h"

namespace sctk {

// MSE between each transverse plane z and z + 1; nz - 1 values.
std::vector<double> ConsecutiveSliceMse(const Volume& volume);

// Similarity of slices: slice-to-slice continuity of a restacked volume
// relative to ground truth,
//
//   SIMOS = 1/(nz-1) * sum_{i=0}^{nz-2} |MSE(gt_i, gt_i+1) - MSE(syn_i, syn_i+1)|
//
// Zero when syn == gt, symmetric, and invariant to adding a constant to
// either volume. kDegenerateInput for nz < 2, kDimension on shape mismatch.
double Simos(const Volume& gt, const Volume& syn);

}  // namespace sctk

#endif  // SCTK_SIMOS_H_
