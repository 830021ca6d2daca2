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

#ifndef SCTK_SSIM_H_
#define SCTK_SSIM_H_

#include <cstddef>
#include <vector>

#include "sctk/volume.h"

namespace sctk {

// Gaussian-windowed SSIM with the classic constants.
struct SsimParams {
  std::size_t window = 11;  // odd
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;

  double c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }
  void Validate() const;
};

// Normalized 1D Gaussian taps; the 2D window is their outer product and
// sums to 1.
std::vector<double> GaussianTaps(std::size_t window, double sigma);

// Mean of the local SSIM map over every position where the window fits
// entirely inside the image. kDegenerateInput when the image is smaller than
// the window, kDimension when shapes differ.
double Ssim(const Slice& pred, const Slice& target, const SsimParams& params = {});

// Per-slice SSIM for each transverse plane.
std::vector<double> SliceSsim(const Volume& pred, const Volume& target,
                              const SsimParams& params = {});

}  // namespace sctk

#endif  // SCTK_SSIM_H_
