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

#ifndef SCTK_VOLUME_H_
#define SCTK_VOLUME_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace sctk {

// What the voxel values mean. kNormalized volumes are guaranteed to lie in
// [0, 1].
enum class ValueKind {
  kHounsfield,
  kNormalized,
  kRawIntensity,
};

std::string_view ValueKindName(ValueKind kind);

struct Dims {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t nz = 0;

  std::size_t plane_size() const { return nx * ny; }
  std::size_t voxel_count() const { return nx * ny * nz; }

  friend bool operator==(const Dims&, const Dims&) = default;
};

// Orientation fields of a NIfTI-1 header, carried through untouched. No
// reorientation is ever applied.
struct Orientation {
  float qfac = 1.0f;
  std::int16_t qform_code = 0;
  std::int16_t sform_code = 0;
  float quatern_b = 0.0f;
  float quatern_c = 0.0f;
  float quatern_d = 0.0f;
  std::array<float, 3> qoffset = {0.0f, 0.0f, 0.0f};
  std::array<float, 4> srow_x = {1.0f, 0.0f, 0.0f, 0.0f};
  std::array<float, 4> srow_y = {0.0f, 1.0f, 0.0f, 0.0f};
  std::array<float, 4> srow_z = {0.0f, 0.0f, 1.0f, 0.0f};
  std::uint8_t xyzt_units = 2;  // NIFTI_UNITS_MM

  friend bool operator==(const Orientation&, const Orientation&) = default;
};

// Spacing is stored at the precision of the on-disk header (float32) so a
// write/read round trip is geometry-identical.
struct VolumeGeometry {
  Dims dims;
  std::array<float, 3> spacing = {1.0f, 1.0f, 1.0f};
  Orientation orientation;

  // Throws kDimension for zero dims and kInvalidArgument for non-positive
  // spacing.
  void Validate() const;

  friend bool operator==(const VolumeGeometry&, const VolumeGeometry&) =
      default;
};

// A 3D voxel grid, x fastest, then y, then z (NIfTI order). A transverse
// plane z is the contiguous block [z*nx*ny, (z+1)*nx*ny).
class Volume {
 public:
  Volume() = default;
  // Validates geometry, voxel count and the kNormalized range.
  Volume(VolumeGeometry geometry, ValueKind kind, std::vector<double> voxels);

  const VolumeGeometry& geometry() const { return geometry_; }
  const Dims& dims() const { return geometry_.dims; }
  ValueKind kind() const { return kind_; }
  std::span<const double> voxels() const { return voxels_; }
  std::span<const double> plane(std::size_t z) const;

  double at(std::size_t x, std::size_t y, std::size_t z) const {
    return voxels_[(z * geometry_.dims.ny + y) * geometry_.dims.nx + x];
  }

  bool empty() const { return voxels_.empty(); }

  friend bool operator==(const Volume&, const Volume&) = default;

 private:
  VolumeGeometry geometry_;
  ValueKind kind_ = ValueKind::kRawIntensity;
  std::vector<double> voxels_;
};

// A transverse (x, y) plane of a volume.
struct Slice {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t index = 0;
  std::array<float, 2> spacing = {1.0f, 1.0f};
  std::vector<double> pixels;

  double at(std::size_t x, std::size_t y) const { return pixels[y * nx + x]; }

  friend bool operator==(const Slice&, const Slice&) = default;
};

}  // namespace sctk

#endif  // SCTK_VOLUME_H_
