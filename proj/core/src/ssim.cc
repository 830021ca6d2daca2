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

#include "sctk/ssim.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sctk/error.h"
#include "sctk/slices.h"

namespace sctk {
namespace {

// Valid-mode separable filtering of an nx*ny image with `taps` along both
// axes. Output is (nx - w + 1) x (ny - w + 1).
std::vector<double> FilterValid(const std::vector<double>& image, std::size_t nx,
                                std::size_t ny, const std::vector<double>& taps) {
  const std::size_t w = taps.size();
  const std::size_t ox = nx - w + 1;
  const std::size_t oy = ny - w + 1;
  std::vector<double> rows(ox * ny);
  for (std::size_t y = 0; y < ny; ++y) {
    const double* in = image.data() + y * nx;
    for (std::size_t x = 0; x < ox; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < w; ++k) acc += taps[k] * in[x + k];
      rows[y * ox + x] = acc;
    }
  }
  std::vector<double> out(ox * oy);
  for (std::size_t y = 0; y < oy; ++y) {
    for (std::size_t x = 0; x < ox; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < w; ++k) acc += taps[k] * rows[(y + k) * ox + x];
      out[y * ox + x] = acc;
    }
  }
  return out;
}

}  // namespace

void SsimParams::Validate() const {
  if (window == 0 || window % 2 == 0) {
    Fail(ErrorCode::kInvalidArgument, "SSIM window must be odd");
  }
  if (!(sigma > 0.0) || !(k1 > 0.0) || !(k2 > 0.0) || !(dynamic_range > 0.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "SSIM sigma, k1, k2 and dynamic range must be positive");
  }
}

std::vector<double> GaussianTaps(std::size_t window, double sigma) {
  std::vector<double> taps(window);
  const double center = static_cast<double>(window / 2);
  double sum = 0.0;
  for (std::size_t i = 0; i < window; ++i) {
    const double d = static_cast<double>(i) - center;
    taps[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += taps[i];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

double Ssim(const Slice& pred, const Slice& target, const SsimParams& params) {
  params.Validate();
  if (pred.nx != target.nx || pred.ny != target.ny ||
      pred.pixels.size() != target.pixels.size()) {
    Fail(ErrorCode::kDimension, "SSIM inputs have different shapes");
  }
  const std::size_t nx = pred.nx;
  const std::size_t ny = pred.ny;
  if (nx < params.window || ny < params.window) {
    Fail(ErrorCode::kDegenerateInput,
         "image " + std::to_string(nx) + "x" + std::to_string(ny) +
             " is smaller than the " + std::to_string(params.window) +
             "-pixel SSIM window");
  }
  const auto taps = GaussianTaps(params.window, params.sigma);
  const auto& x = pred.pixels;
  const auto& y = target.pixels;
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mu_x = FilterValid(x, nx, ny, taps);
  const auto mu_y = FilterValid(y, nx, ny, taps);
  const auto e_xx = FilterValid(xx, nx, ny, taps);
  const auto e_yy = FilterValid(yy, nx, ny, taps);
  const auto e_xy = FilterValid(xy, nx, ny, taps);

  const double c1 = params.c1();
  const double c2 = params.c2();
  double sum = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double mx = mu_x[i];
    const double my = mu_y[i];
    // Not clamped at zero: identical inputs must give exactly 1.
    const double var_x = e_xx[i] - mx * mx;
    const double var_y = e_yy[i] - my * my;
    const double cov = e_xy[i] - mx * my;
    sum += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
           ((mx * mx + my * my + c1) * (var_x + var_y + c2));
  }
  return sum / static_cast<double>(mu_x.size());
}

std::vector<double> SliceSsim(const Volume& pred, const Volume& target,
                              const SsimParams& params) {
  if (pred.dims() != target.dims()) {
    Fail(ErrorCode::kDimension, "SSIM volumes have different shapes");
  }
  std::vector<double> out;
  out.reserve(pred.dims().nz);
  for (std::size_t z = 0; z < pred.dims().nz; ++z) {
    out.push_back(Ssim(ExtractTransverseSlice(pred, z),
                       ExtractTransverseSlice(target, z), params));
  }
  return out;
}

}  // namespace sctk
