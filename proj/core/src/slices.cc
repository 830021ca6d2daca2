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

#include "sctk/slices.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>

#include "sctk/error.h"
#include "sctk/nifti.h"

namespace sctk {

Slice ExtractTransverseSlice(const Volume& volume, std::size_t z) {
  const Dims& d = volume.dims();
  if (z >= d.nz) {
    Fail(ErrorCode::kDimension, "slice index " + std::to_string(z) +
                                    " out of range for nz=" +
                                    std::to_string(d.nz));
  }
  const auto plane = volume.plane(z);
  Slice slice;
  slice.nx = d.nx;
  slice.ny = d.ny;
  slice.index = z;
  slice.spacing = {volume.geometry().spacing[0], volume.geometry().spacing[1]};
  slice.pixels.assign(plane.begin(), plane.end());
  return slice;
}

std::vector<Slice> ExtractTransverseSlices(const Volume& volume) {
  if (volume.empty()) Fail(ErrorCode::kDimension, "cannot slice an empty volume");
  std::vector<Slice> slices;
  slices.reserve(volume.dims().nz);
  for (std::size_t z = 0; z < volume.dims().nz; ++z) {
    slices.push_back(ExtractTransverseSlice(volume, z));
  }
  return slices;
}

Volume StackSlices(std::span<const Slice> slices, const VolumeGeometry& geometry,
                   ValueKind kind) {
  const Dims& d = geometry.dims;
  if (slices.size() != d.nz) {
    Fail(ErrorCode::kDimension, "got " + std::to_string(slices.size()) +
                                    " slices for a geometry with nz=" +
                                    std::to_string(d.nz));
  }
  std::vector<double> voxels;
  voxels.reserve(d.voxel_count());
  for (std::size_t z = 0; z < slices.size(); ++z) {
    const Slice& s = slices[z];
    if (s.nx != d.nx || s.ny != d.ny || s.pixels.size() != d.plane_size()) {
      Fail(ErrorCode::kDimension,
           "slice " + std::to_string(z) + " has shape " + std::to_string(s.nx) +
               "x" + std::to_string(s.ny) + ", geometry expects " +
               std::to_string(d.nx) + "x" + std::to_string(d.ny));
    }
    voxels.insert(voxels.end(), s.pixels.begin(), s.pixels.end());
  }
  return Volume(geometry, kind, std::move(voxels));
}

void WriteSliceStack(std::span<const Slice> slices, const VolumeGeometry& geometry,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  VolumeGeometry plane_geometry = geometry;
  plane_geometry.dims.nz = 1;
  std::string index = "z,file\n";
  for (std::size_t z = 0; z < slices.size(); ++z) {
    char name[32];
    std::snprintf(name, sizeof(name), "slice_%04zu.nii", z);
    WriteNifti(StackSlices(slices.subspan(z, 1), plane_geometry, ValueKind::kRawIntensity),
               dir / name);
    index += std::to_string(z) + "," + name + "\n";
  }
  const auto index_path = dir / "index.csv";
  std::ofstream out(index_path, std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + index_path.string() + " for writing");
  out << index;
  if (!out) Fail(ErrorCode::kIo, "write failed for " + index_path.string());
}

std::vector<Slice> ReadSliceStack(const std::filesystem::path& index_path) {
  std::ifstream in(index_path);
  if (!in) Fail(ErrorCode::kIo, "cannot open slice index " + index_path.string());
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "z,file") {
    Fail(ErrorCode::kFormat, index_path.string() + ": expected header 'z,file'");
  }
  std::map<std::size_t, std::filesystem::path> files;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    std::size_t z = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + std::min(comma, line.size()), z);
    if (comma == std::string::npos || ec != std::errc() || ptr != line.data() + comma ||
        comma + 1 == line.size() ||
        !files.emplace(z, index_path.parent_path() / line.substr(comma + 1)).second) {
      Fail(ErrorCode::kFormat, index_path.string() + ": bad or duplicate row '" + line + "'");
    }
  }
  std::vector<Slice> slices;
  slices.reserve(files.size());
  for (const auto& [z, file] : files) {
    if (z != slices.size()) {
      Fail(ErrorCode::kDimension, index_path.string() + ": slice " +
                                      std::to_string(slices.size()) + " is missing");
    }
    const Volume plane = ReadNifti(file, ValueKind::kRawIntensity);
    if (plane.dims().nz != 1) {
      Fail(ErrorCode::kDimension, file.string() + " is not a single slice");
    }
    Slice s = ExtractTransverseSlice(plane, 0);
    s.index = z;
    slices.push_back(std::move(s));
  }
  return slices;
}

}  // namespace sctk
