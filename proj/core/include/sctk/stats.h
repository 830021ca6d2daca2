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

#ifndef SCTK_STATS_H_
#define SCTK_STATS_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace sctk {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1); 0 for n < 2
  std::size_t n = 0;
};

// Fixed-order summation so repeated runs are bit-identical. A sample made
// of one repeated value (including +inf) has std 0.
inline MeanStd Summarize(std::span<const double> values) {
  MeanStd out;
  out.n = values.size();
  if (values.empty()) return out;
  if (std::all_of(values.begin(), values.end(),
                  [&](double v) { return v == values.front(); })) {
    out.mean = values.front();
    return out;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() >= 2) {
    double sq = 0.0;
    for (double v : values) sq += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return out;
}

inline double Mean(std::span<const double> values) { return Summarize(values).mean; }

}  // namespace sctk

#endif  // SCTK_STATS_H_
