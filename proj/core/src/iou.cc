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

#include "sctk/iou.h"

#include <string>

#include "sctk/error.h"

namespace sctk {

double Iou(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) {
    Fail(ErrorCode::kDimension, "mask sizes differ: " + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()));
  }
  std::size_t inter = 0;
  std::size_t size_a = 0;
  std::size_t size_b = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool in_a = a[i] != 0;
    const bool in_b = b[i] != 0;
    inter += in_a && in_b;
    size_a += in_a;
    size_b += in_b;
  }
  return IouFromCounts(inter, size_a, size_b);
}

double IouFromCounts(std::size_t intersection, std::size_t size_a, std::size_t size_b) {
  if (intersection > size_a || intersection > size_b) {
    Fail(ErrorCode::kInvalidArgument, "intersection exceeds a mask size");
  }
  const std::size_t uni = size_a + size_b - intersection;
  if (uni == 0) return 1.0;
  return static_cast<double>(intersection) / static_cast<double>(uni);
}

}  // namespace sctk
