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

// Portable deterministic randomness for splitting and subset selection.
//
// Every random decision in sctk goes through Xoshiro256StarStar so results
// reproduce across platforms and implementations:
//
//   SplitMix64 (seeding):
//     x += 0x9E3779B97F4A7C15
//     z = x
//     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//     return z ^ (z >> 31)
//
//   xoshiro256** (state s[0..3], seeded with four SplitMix64 outputs):
//     result = rotl(s[1] * 5, 7) * 9
//     t = s[1] << 17
//     s[2] ^= s[0]; s[3] ^= s[1]; s[1] ^= s[2]; s[0] ^= s[3]
//     s[2] ^= t; s[3] = rotl(s[3], 45)
//     return result
//
//   Bounded draw in [0, n): rejection sampling on the top of the 64-bit
//   range, uniform without modulo bias.
//
//   Shuffle: Fisher-Yates from the back, swap(v[i], v[Below(i + 1)]) for
//   i = n-1 .. 1.

#ifndef SCTK_RNG_H_
#define SCTK_RNG_H_

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace sctk {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t Next();

 private:
  std::uint64_t state_;
};

class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(std::uint64_t seed);

  std::uint64_t Next();
  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t Below(std::uint64_t bound);

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::array<std::uint64_t, 4> s_;
};

// 64-bit FNV-1a.
std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xCBF29CE484222325ULL);

// Derives an independent stream seed from a user seed and a string key.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view key);

}  // namespace sctk

#endif  // SCTK_RNG_H_
