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

#ifndef SCTK_SLICES_H_
#define SCTK_SLICES_H_

#include <filesystem>
#include <span>
#include <vector>

#include "sctk/volume.h"

namespace sctk {

// Returns the nz transverse planes in ascending z.
std::vector<Slice> ExtractTransverseSlices(const Volume& volume);

Slice ExtractTransverseSlice(const Volume& volume, std::size_t z);

// Restacks slices into a volume with the given geometry. slices[i] becomes
// plane z = i regardless of slices[i].index. Throws kDimension when the count
// differs from geometry nz or any slice's in-plane shape differs.
Volume StackSlices(std::span<const Slice> slices, const VolumeGeometry& geometry,
                   ValueKind kind);

// Slice stacks on disk: <dir>/index.csv holds a "z,file" header and one row
// per slice naming a single-slice NIfTI file relative to <dir>.
void WriteSliceStack(std::span<const Slice> slices, const VolumeGeometry& geometry,
                     const std::filesystem::path& dir);

// Returns the slices ordered by z. The z values must be exactly 0..n-1.
std::vector<Slice> ReadSliceStack(const std::filesystem::path& index_path);

}  // namespace sctk

#endif  // SCTK_SLICES_H_
