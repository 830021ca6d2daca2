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

// NIfTI-1 single-file (.nii / .nii.gz) reader and writer.
//
// Reading accepts little- and big-endian headers (detected through the
// dim[0] sanity check), gzip containers (detected by the 0x1F 0x8B prefix),
// and datatypes uint8, int16, float32 and float64. scl_slope/scl_inter are
// applied when slope is finite and non-zero. Only 3D data is accepted; a
// header with dim[0] < 3 is promoted to 3D, and higher dimensions must be 1.
//
// Writing always produces an uncompressed little-endian float32 file with
// identity scaling and the orientation fields passed through verbatim.

#ifndef SCTK_NIFTI_H_
#define SCTK_NIFTI_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sctk/volume.h"

namespace sctk {

namespace nifti {
inline constexpr std::int32_t kHeaderSize = 348;
inline constexpr std::int32_t kDefaultVoxOffset = 352;

inline constexpr std::int16_t kDtUint8 = 2;
inline constexpr std::int16_t kDtInt16 = 4;
inline constexpr std::int16_t kDtFloat32 = 16;
inline constexpr std::int16_t kDtFloat64 = 64;
}  // namespace nifti

// Parses an in-memory file image (possibly gzip-compressed). Any input
// either yields a Volume or throws sctk::Error (kFormat,
// kUnsupportedDatatype or kIo for truncated payloads).
Volume DecodeNifti(std::span<const std::uint8_t> bytes,
                   ValueKind kind = ValueKind::kRawIntensity);

Volume ReadNifti(const std::filesystem::path& path,
                 ValueKind kind = ValueKind::kRawIntensity);

// Reads only the header; gzip streams are inflated just far enough.
VolumeGeometry ReadNiftiGeometry(const std::filesystem::path& path);

std::vector<std::uint8_t> EncodeNifti(const Volume& volume);

// Gzip-compresses when the path ends in .gz.
void WriteNifti(const Volume& volume, const std::filesystem::path& path);

std::vector<std::uint8_t> GzipBytes(std::span<const std::uint8_t> bytes);

// Inflates a gzip stream; throws kFormat on corrupt data.
std::vector<std::uint8_t> GunzipBytes(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);

}  // namespace sctk

#endif  // SCTK_NIFTI_H_
