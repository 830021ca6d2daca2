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

#ifndef SCTK_IOU_H_
#define SCTK_IOU_H_

#include <cstddef>
#include <cstdint>
#include <span>

namespace sctk {

// |a & b| / |a | b| over binary masks (non-zero = foreground). Two empty
// masks agree perfectly and give 1.0. kDimension on size mismatch.
double Iou(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

// IoU from foreground counts: intersection / (size_a + size_b - intersection),
// 1.0 when both are empty.
double IouFromCounts(std::size_t intersection, std::size_t size_a, std::size_t size_b);

}  // namespace sctk

#endif  // SCTK_IOU_H_
