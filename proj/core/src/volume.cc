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

#include "sctk/volume.h"

#include <cmath>
#include <string>
#include <utility>

#include "sctk/error.h"

namespace sctk {

std::string_view ValueKindName(ValueKind kind) {
  switch (kind) {
    case ValueKind::kHounsfield:
      return "hu";
    case ValueKind::kNormalized:
      return "normalized";
    case ValueKind::kRawIntensity:
      return "raw";
  }
  return "unknown";
}

void VolumeGeometry::Validate() const {
  if (dims.nx == 0 || dims.ny == 0 || dims.nz == 0) {
    Fail(ErrorCode::kDimension,
         "volume dims must be positive, got " + std::to_string(dims.nx) +
             "x" + std::to_string(dims.ny) + "x" + std::to_string(dims.nz));
  }
  for (float s : spacing) {
    if (!(s > 0.0f) || !std::isfinite(s)) {
      Fail(ErrorCode::kInvalidArgument,
           "voxel spacing must be finite and positive, got " +
               std::to_string(s));
    }
  }
}

Volume::Volume(VolumeGeometry geometry, ValueKind kind,
               std::vector<double> voxels)
    : geometry_(std::move(geometry)), kind_(kind), voxels_(std::move(voxels)) {
  geometry_.Validate();
  if (voxels_.size() != geometry_.dims.voxel_count()) {
    Fail(ErrorCode::kDimension,
         "voxel count " + std::to_string(voxels_.size()) +
             " does not match dims product " +
             std::to_string(geometry_.dims.voxel_count()));
  }
  if (kind_ == ValueKind::kNormalized) {
    for (double v : voxels_) {
      if (!(v >= 0.0 && v <= 1.0)) {
        Fail(ErrorCode::kInvalidArgument,
             "normalized volume has voxel outside [0, 1]: " +
                 std::to_string(v));
      }
    }
  }
}

std::span<const double> Volume::plane(std::size_t z) const {
  const std::size_t n = geometry_.dims.plane_size();
  return std::span<const double>(voxels_).subspan(z * n, n);
}

}  // namespace sctk
