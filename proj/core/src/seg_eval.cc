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

#include "sctk/seg_eval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "sctk/error.h"
#include "sctk/iou.h"
#include "sctk/nifti.h"
#include "sctk/rng.h"
#include "sctk/stats.h"

namespace sctk {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::map<std::string, LabelId> IdsByName(const LabelMaskVolume& m) {
  std::map<std::string, LabelId> out;
  for (const auto& [id, name] : m.label_names) {
    if (id != 0) out.emplace(name, id);
  }
  return out;
}

std::vector<std::size_t> LabelCounts(const std::vector<LabelId>& labels) {
  std::vector<std::size_t> counts(1u << 16, 0);
  for (LabelId l : labels) ++counts[l];
  return counts;
}

}  // namespace

void LabelMaskVolume::Validate() const {
  geometry.Validate();
  if (labels.size() != geometry.dims.voxel_count()) {
    Fail(ErrorCode::kDimension, "label count does not match mask dims");
  }
  std::set<std::string> names;
  for (const auto& [id, name] : label_names) {
    if (id != 0 && !names.insert(name).second) {
      Fail(ErrorCode::kFormat, "label name '" + name + "' is used twice");
    }
  }
  std::vector<bool> seen(1u << 16, false);
  for (LabelId l : labels) {
    if (l == 0 || seen[l]) continue;
    seen[l] = true;
    if (!label_names.contains(l)) {
      Fail(ErrorCode::kFormat, "label " + std::to_string(l) + " has no name in the label map");
    }
  }
}

std::map<LabelId, std::string> ParseLabelMap(std::string_view text) {
  std::map<LabelId, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = Trim(line);
    if (row.empty() || row.front() == '#') continue;
    auto sep = row.find('\t');
    if (sep == std::string_view::npos) sep = row.find(' ');
    if (sep == std::string_view::npos) {
      Fail(ErrorCode::kFormat, "label map line " + std::to_string(line_no) +
                                   ": expected id<TAB>name");
    }
    const std::string_view id_text = Trim(row.substr(0, sep));
    const std::string name(Trim(row.substr(sep + 1)));
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), value);
    if (ec != std::errc() || ptr != id_text.data() + id_text.size() || value > 0xFFFF ||
        name.empty()) {
      Fail(ErrorCode::kFormat, "label map line " + std::to_string(line_no) +
                                   ": bad id or empty name");
    }
    if (!out.emplace(static_cast<LabelId>(value), name).second) {
      Fail(ErrorCode::kFormat, "label id " + std::string(id_text) + " listed twice");
    }
  }
  return out;
}

std::string LabelMapToTsv(const std::map<LabelId, std::string>& names) {
  std::string out;
  for (const auto& [id, name] : names) {
    out += std::to_string(id) + "\t" + name + "\n";
  }
  return out;
}

std::filesystem::path LabelMapPathFor(const std::filesystem::path& mask_path) {
  std::string name = mask_path.filename().string();
  for (const std::string_view ext : {".nii.gz", ".nii"}) {
    if (name.ends_with(ext)) {
      name.resize(name.size() - ext.size());
      break;
    }
  }
  return mask_path.parent_path() / (name + ".labels.tsv");
}

LabelMaskVolume ReadLabelMask(const std::filesystem::path& nifti_path,
                              const std::filesystem::path& label_map_path) {
  const Volume volume = ReadNifti(nifti_path, ValueKind::kRawIntensity);
  LabelMaskVolume mask;
  mask.geometry = volume.geometry();
  mask.labels.reserve(volume.voxels().size());
  for (double v : volume.voxels()) {
    if (!(v >= 0.0 && v <= 65535.0) || v != std::floor(v)) {
      Fail(ErrorCode::kFormat, nifti_path.string() +
                                   ": mask voxels must be integers in [0, 65535]");
    }
    mask.labels.push_back(static_cast<LabelId>(v));
  }
  std::ifstream in(label_map_path);
  if (!in) Fail(ErrorCode::kIo, "cannot open label map " + label_map_path.string());
  std::ostringstream text;
  text << in.rdbuf();
  mask.label_names = ParseLabelMap(text.str());
  try {
    mask.Validate();
  } catch (const Error& e) {
    throw Error(e.code(), nifti_path.string() + ": " + e.what());
  }
  return mask;
}

LabelMaskVolume ReadLabelMask(const std::filesystem::path& nifti_path) {
  return ReadLabelMask(nifti_path, LabelMapPathFor(nifti_path));
}

void WriteLabelMask(const LabelMaskVolume& mask, const std::filesystem::path& nifti_path) {
  mask.Validate();
  std::vector<double> voxels(mask.labels.begin(), mask.labels.end());
  WriteNifti(Volume(mask.geometry, ValueKind::kRawIntensity, std::move(voxels)), nifti_path);
  const auto tsv_path = LabelMapPathFor(nifti_path);
  std::ofstream out(tsv_path, std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + tsv_path.string() + " for writing");
  out << LabelMapToTsv(mask.label_names);
  if (!out) Fail(ErrorCode::kIo, "write failed for " + tsv_path.string());
}

std::vector<std::string> SelectEvalSubset(std::span<const std::string> ids,
                                          double fraction, std::uint64_t seed) {
  if (ids.empty()) Fail(ErrorCode::kInvalidArgument, "empty patient list");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "subset fraction must lie in (0, 1]");
  }
  std::vector<std::string> pool(ids.begin(), ids.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  const double n = static_cast<double>(pool.size());
  auto count = static_cast<std::size_t>(std::ceil(fraction * n - 1e-9));
  count = std::clamp<std::size_t>(count, 1, pool.size());
  Xoshiro256StarStar rng(DeriveSeed(seed, "seg-eval-subset"));
  rng.Shuffle(pool);
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

MeanIouResult MeanLabelIou(const LabelMaskVolume& gt, const LabelMaskVolume& syn) {
  if (gt.geometry.dims != syn.geometry.dims || gt.labels.size() != syn.labels.size()) {
    Fail(ErrorCode::kDimension, "mask volumes have different dims");
  }
  const auto gt_counts = LabelCounts(gt.labels);
  const auto syn_counts = LabelCounts(syn.labels);
  std::unordered_map<std::uint32_t, std::size_t> joint;
  for (std::size_t i = 0; i < gt.labels.size(); ++i) {
    if (gt.labels[i] != 0 && syn.labels[i] != 0) {
      ++joint[(static_cast<std::uint32_t>(gt.labels[i]) << 16) | syn.labels[i]];
    }
  }

  const auto gt_ids = IdsByName(gt);
  const auto syn_ids = IdsByName(syn);
  std::set<std::string> names;
  for (const auto& [name, id] : gt_ids) names.insert(name);
  for (const auto& [name, id] : syn_ids) names.insert(name);

  MeanIouResult result;
  double sum = 0.0;
  for (const auto& name : names) {
    const auto g = gt_ids.find(name);
    const auto s = syn_ids.find(name);
    const std::size_t size_gt = g == gt_ids.end() ? 0 : gt_counts[g->second];
    const std::size_t size_syn = s == syn_ids.end() ? 0 : syn_counts[s->second];
    if (size_gt + size_syn == 0) continue;
    std::size_t inter = 0;
    if (size_gt > 0 && size_syn > 0) {
      const auto it = joint.find((static_cast<std::uint32_t>(g->second) << 16) | s->second);
      if (it != joint.end()) inter = it->second;
    }
    const double iou = IouFromCounts(inter, size_gt, size_syn);
    result.per_label.push_back({name, iou});
    sum += iou;
  }
  if (!result.per_label.empty()) {
    result.mean = sum / static_cast<double>(result.per_label.size());
  }
  return result;
}

LabelMaskVolume TransverseMaskSlice(const LabelMaskVolume& mask, std::size_t z) {
  const Dims& d = mask.geometry.dims;
  if (z >= d.nz) Fail(ErrorCode::kDimension, "mask slice index out of range");
  LabelMaskVolume out;
  out.geometry = mask.geometry;
  out.geometry.dims.nz = 1;
  const auto begin = mask.labels.begin() + static_cast<std::ptrdiff_t>(z * d.plane_size());
  out.labels.assign(begin, begin + static_cast<std::ptrdiff_t>(d.plane_size()));
  out.label_names = mask.label_names;
  return out;
}

std::vector<MeanIouResult> PerSliceLabelIou(const LabelMaskVolume& gt,
                                            const LabelMaskVolume& syn) {
  if (gt.geometry.dims != syn.geometry.dims) {
    Fail(ErrorCode::kDimension, "mask volumes have different dims");
  }
  std::vector<MeanIouResult> out;
  out.reserve(gt.geometry.dims.nz);
  for (std::size_t z = 0; z < gt.geometry.dims.nz; ++z) {
    out.push_back(MeanLabelIou(TransverseMaskSlice(gt, z), TransverseMaskSlice(syn, z)));
  }
  return out;
}

MeanIouResult MeanSliceIou(const LabelMaskVolume& gt, const LabelMaskVolume& syn) {
  const auto planes = PerSliceLabelIou(gt, syn);
  std::map<std::string, std::vector<double>> by_name;
  std::vector<double> means;
  for (const auto& plane : planes) {
    if (plane.per_label.empty()) continue;
    means.push_back(plane.mean);
    for (const auto& l : plane.per_label) by_name[l.name].push_back(l.iou);
  }
  MeanIouResult result;
  if (!means.empty()) result.mean = Mean(means);
  for (const auto& [name, values] : by_name) result.per_label.push_back({name, Mean(values)});
  return result;
}

CohortIou AggregateCohortIou(std::span<const MeanIouResult> per_patient) {
  CohortIou out;
  out.patients = per_patient.size();
  if (per_patient.empty()) return out;
  std::vector<double> means;
  std::vector<double> pooled;
  for (const auto& p : per_patient) {
    means.push_back(p.mean);
    for (const auto& l : p.per_label) pooled.push_back(l.iou);
  }
  const MeanStd s = Summarize(means);
  out.patient_mean = s.mean;
  out.patient_std = s.std;
  out.pooled_label_mean = pooled.empty() ? s.mean : Mean(pooled);
  return out;
}

}  // namespace sctk
