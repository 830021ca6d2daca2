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

#ifndef SCTK_REPORT_H_
#define SCTK_REPORT_H_

#include <string>
#include <string_view>

#include "sctk/evaluate.h"

namespace sctk {

enum class ReportFormat { kCsv, kJson, kMarkdown };

ReportFormat ParseReportFormat(std::string_view text);

// Byte-deterministic rendering. The markdown table has one row per model
// and the columns SSIM, PSNR, MAE, MSE, FID, SIMOS, 2D IoU, 3D IoU with
// their better-direction arrows. Throws kUsage for a report without models.
std::string RenderReport(const MetricReport& report, ReportFormat format);

// The JSON form round-trips through ParseReportJson (non-finite numbers are
// written as the strings "inf", "-inf" and "nan"). Per-patient slice
// vectors are not serialized.
MetricReport ParseReportJson(std::string_view text);

}  // namespace sctk

#endif  // SCTK_REPORT_H_
