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

#ifndef SCTK_PIXEL_METRICS_H_
#define SCTK_PIXEL_METRICS_H_

#include <span>

#include "sctk/volume.h"

namespace sctk {

// PSNR peak for data in [0, 1] and for HU data in [-1000, 2000].
inline constexpr double kNormalizedPeak = 1.0;
inline constexpr double kHounsfieldPeak = 3000.0;

struct PixelMetrics {
  double mae = 0.0;
  double mse = 0.0;
  double psnr = 0.0;  // +infinity when mse == 0
};

// psnr = 10 log10(peak^2 / mse); +infinity for mse == 0.
double PsnrFromMse(double mse, double peak);

// Throws kDimension on size mismatch or empty input, kInvalidArgument for
// peak <= 0.
PixelMetrics ComputePixelMetrics(std::span<const double> pred,
                                 std::span<const double> target, double peak);
PixelMetrics ComputePixelMetrics(const Slice& pred, const Slice& target,
                                 double peak);
PixelMetrics ComputePixelMetrics(const Volume& pred, const Volume& target,
                                 double peak);

// Mean squared difference; the building block of SIMOS.
double MeanSquaredError(std::span<const double> a, std::span<const double> b);

}  // namespace sctk

#endif  // SCTK_PIXEL_METRICS_H_
