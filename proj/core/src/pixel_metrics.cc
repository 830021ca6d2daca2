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

#include "sctk/pixel_metrics.h"

#include <cmath>
#include <limits>
#include <string>

#include "sctk/error.h"

namespace sctk {
namespace {

void CheckSameSize(std::size_t a, std::size_t b) {
  if (a != b) {
    Fail(ErrorCode::kDimension, "shape mismatch: " + std::to_string(a) +
                                    " vs " + std::to_string(b) + " elements");
  }
  if (a == 0) Fail(ErrorCode::kDimension, "empty input");
}

}  // namespace

double PsnrFromMse(double mse, double peak) {
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

double MeanSquaredError(std::span<const double> a, std::span<const double> b) {
  CheckSameSize(a.size(), b.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

PixelMetrics ComputePixelMetrics(std::span<const double> pred,
                                 std::span<const double> target, double peak) {
  CheckSameSize(pred.size(), target.size());
  if (!(peak > 0.0)) Fail(ErrorCode::kInvalidArgument, "PSNR peak must be positive");
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    abs_sum += std::abs(d);
    sq_sum += d * d;
  }
  const auto n = static_cast<double>(pred.size());
  PixelMetrics m;
  m.mae = abs_sum / n;
  m.mse = sq_sum / n;
  m.psnr = PsnrFromMse(m.mse, peak);
  return m;
}

PixelMetrics ComputePixelMetrics(const Slice& pred, const Slice& target,
                                 double peak) {
  if (pred.nx != target.nx || pred.ny != target.ny) {
    Fail(ErrorCode::kDimension, "slice shapes differ");
  }
  return ComputePixelMetrics(pred.pixels, target.pixels, peak);
}

PixelMetrics ComputePixelMetrics(const Volume& pred, const Volume& target,
                                 double peak) {
  if (pred.dims() != target.dims()) {
    Fail(ErrorCode::kDimension, "volume shapes differ");
  }
  return ComputePixelMetrics(pred.voxels(), target.voxels(), peak);
}

}  // namespace sctk
