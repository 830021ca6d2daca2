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

#include "sctk/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sctk/dataset.h"
#include "sctk/embedding.h"
#include "sctk/error.h"

namespace sctk {
namespace {

const std::set<std::string>& KnownKeys() {
  static const std::set<std::string> keys = {
      "dataset_root", "split_csv",  "predictions",    "output_dir",   "models",
      "scale",        "prediction_scale", "ct_floor", "ct_cap",       "mri_percentile",
      "ssim_window",  "ssim_sigma", "ssim_k1",        "ssim_k2",      "embedder",
      "gt_embeddings", "seed",      "seg_fraction",   "jobs"};
  return keys;
}

double ParseDouble(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    Fail(ErrorCode::kConfig, "config key '" + key + "': '" + text + "' is not a number");
  }
  return value;
}

std::uint64_t ParseUnsigned(const std::string& key, const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    Fail(ErrorCode::kConfig,
         "config key '" + key + "': '" + text + "' is not a non-negative integer");
  }
  return value;
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = item.find_last_not_of(" \t");
    out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void RequireExists(const std::filesystem::path& p, const char* what) {
  if (!std::filesystem::exists(p)) {
    Fail(ErrorCode::kConfig, std::string(what) + " does not exist: " + p.string());
  }
}

}  // namespace

std::string_view MetricScaleName(MetricScale scale) {
  return scale == MetricScale::kNormalized ? "normalized" : "hu";
}

MetricScale ParseMetricScale(std::string_view text) {
  if (text == "normalized") return MetricScale::kNormalized;
  if (text == "hu") return MetricScale::kHounsfield;
  Fail(ErrorCode::kConfig, "scale must be 'normalized' or 'hu', got '" + std::string(text) + "'");
}

double RunConfig::peak() const {
  return scale == MetricScale::kNormalized
             ? 1.0
             : normalization.ct_cap - normalization.ct_floor;
}

RunConfig ParseRunConfig(std::string_view text, const std::filesystem::path& base_dir) {
  std::map<std::string, std::string> kv;
  try {
    kv = ParseKeyValue(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, std::string("config: ") + e.what());
  }
  for (const auto& [key, value] : kv) {
    if (!KnownKeys().contains(key)) Fail(ErrorCode::kConfig, "unknown config key '" + key + "'");
  }
  const auto require = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end() || it->second.empty()) {
      Fail(ErrorCode::kConfig, std::string("config is missing '") + key + "'");
    }
    return it->second;
  };
  const auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return (path.is_absolute() ? path : base_dir / path).lexically_normal();
  };

  RunConfig c;
  c.dataset_root = resolve(require("dataset_root"));
  c.split_csv = resolve(require("split_csv"));
  c.predictions_dir = resolve(require("predictions"));
  c.output_dir = resolve(require("output_dir"));
  c.models = SplitList(require("models"));
  if (c.models.empty()) Fail(ErrorCode::kConfig, "config lists no models");

  const auto get = [&](const char* key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto* v = get("scale")) c.scale = ParseMetricScale(*v);
  if (auto* v = get("prediction_scale")) c.prediction_scale = ParseMetricScale(*v);
  if (auto* v = get("ct_floor")) c.normalization.ct_floor = ParseDouble("ct_floor", *v);
  if (auto* v = get("ct_cap")) c.normalization.ct_cap = ParseDouble("ct_cap", *v);
  if (auto* v = get("mri_percentile")) {
    c.normalization.mri_percentile = ParseDouble("mri_percentile", *v);
  }
  if (auto* v = get("ssim_window")) c.ssim.window = ParseUnsigned("ssim_window", *v);
  if (auto* v = get("ssim_sigma")) c.ssim.sigma = ParseDouble("ssim_sigma", *v);
  if (auto* v = get("ssim_k1")) c.ssim.k1 = ParseDouble("ssim_k1", *v);
  if (auto* v = get("ssim_k2")) c.ssim.k2 = ParseDouble("ssim_k2", *v);
  if (auto* v = get("embedder")) c.embedder = *v;
  if (auto* v = get("gt_embeddings")) c.gt_embeddings = resolve(*v);
  if (auto* v = get("seed")) c.seed = ParseUnsigned("seed", *v);
  if (auto* v = get("seg_fraction")) c.seg_fraction = ParseDouble("seg_fraction", *v);
  if (auto* v = get("jobs")) c.jobs = ParseUnsigned("jobs", *v);
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseRunConfig(text.str(), path.parent_path());
}

void ValidateRunConfig(const RunConfig& c) {
  RequireExists(c.dataset_root, "dataset_root");
  RequireExists(c.split_csv, "split_csv");
  RequireExists(c.predictions_dir, "predictions");
  if (c.models.empty()) Fail(ErrorCode::kConfig, "config lists no models");
  try {
    c.normalization.Validate();
    c.ssim.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  if (!(c.seg_fraction > 0.0 && c.seg_fraction <= 1.0)) {
    Fail(ErrorCode::kConfig, "seg_fraction must lie in (0, 1]");
  }
  if (c.jobs == 0) Fail(ErrorCode::kConfig, "jobs must be >= 1");
  if (c.embedder == kExternalEmbedder) {
    if (!c.gt_embeddings) {
      Fail(ErrorCode::kConfig, "embedder = external needs gt_embeddings");
    }
    RequireExists(*c.gt_embeddings, "gt_embeddings");
  } else {
    MakeEmbedder(c.embedder);
  }
}

std::string CanonicalConfigText(const RunConfig& c) {
  std::string out;
  const auto line = [&](const char* key, const std::string& value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  };
  line("dataset_root", c.dataset_root.generic_string());
  line("split_csv", c.split_csv.generic_string());
  line("predictions", c.predictions_dir.generic_string());
  std::string models;
  for (const auto& m : c.models) models += (models.empty() ? "" : ",") + m;
  line("models", models);
  line("scale", std::string(MetricScaleName(c.scale)));
  line("prediction_scale", std::string(MetricScaleName(c.prediction_scale)));
  line("ct_floor", FormatDouble(c.normalization.ct_floor));
  line("ct_cap", FormatDouble(c.normalization.ct_cap));
  line("mri_percentile", FormatDouble(c.normalization.mri_percentile));
  line("ssim_window", std::to_string(c.ssim.window));
  line("ssim_sigma", FormatDouble(c.ssim.sigma));
  line("ssim_k1", FormatDouble(c.ssim.k1));
  line("ssim_k2", FormatDouble(c.ssim.k2));
  line("embedder", c.embedder);
  line("gt_embeddings", c.gt_embeddings ? c.gt_embeddings->generic_string() : "");
  line("seed", std::to_string(c.seed));
  line("seg_fraction", FormatDouble(c.seg_fraction));
  return out;
}

}  // namespace sctk
