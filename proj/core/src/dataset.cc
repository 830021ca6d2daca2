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

#include "sctk/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "sctk/error.h"
#include "sctk/nifti.h"
#include "sctk/rng.h"
#include "sctk/slices.h"

namespace sctk {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string ShapeString(const Dims& d) {
  return std::to_string(d.nx) + "x" + std::to_string(d.ny) + "x" +
         std::to_string(d.nz);
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string_view RegionName(Region r) {
  return r == Region::kBrain ? "brain" : "pelvis";
}

std::string_view HospitalName(Hospital h) {
  switch (h) {
    case Hospital::kA:
      return "A";
    case Hospital::kB:
      return "B";
    case Hospital::kC:
      return "C";
  }
  return "?";
}

std::string_view SplitName(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "?";
}

Region ParseRegion(std::string_view text) {
  text = Trim(text);
  if (text == "brain") return Region::kBrain;
  if (text == "pelvis") return Region::kPelvis;
  Fail(ErrorCode::kFormat, "unknown region '" + std::string(text) + "'");
}

Hospital ParseHospital(std::string_view text) {
  text = Trim(text);
  if (text == "A") return Hospital::kA;
  if (text == "B") return Hospital::kB;
  if (text == "C") return Hospital::kC;
  Fail(ErrorCode::kFormat, "unknown hospital '" + std::string(text) + "'");
}

Split ParseSplit(std::string_view text) {
  text = Trim(text);
  if (text == "train") return Split::kTrain;
  if (text == "val") return Split::kVal;
  if (text == "test") return Split::kTest;
  Fail(ErrorCode::kFormat, "unknown split '" + std::string(text) + "'");
}

std::map<std::string, std::string> ParseKeyValue(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || Trim(line.substr(0, eq)).empty()) {
      Fail(ErrorCode::kFormat,
           "line " + std::to_string(line_no) + ": expected key=value");
    }
    out[std::string(Trim(line.substr(0, eq)))] =
        std::string(Trim(line.substr(eq + 1)));
  }
  return out;
}

std::optional<std::filesystem::path> FindNifti(const std::filesystem::path& dir,
                                               std::string_view stem) {
  for (const char* ext : {".nii.gz", ".nii"}) {
    auto candidate = dir / (std::string(stem) + ext);
    if (std::filesystem::is_regular_file(candidate)) return candidate;
  }
  return std::nullopt;
}

Manifest BuildManifest(const std::filesystem::path& root) {
  std::error_code ec;
  std::filesystem::directory_iterator it(root, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot read dataset root " + root.string() +
                                   ": " + ec.message());
  std::vector<std::filesystem::path> dirs;
  for (const auto& entry : it) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());

  Manifest manifest;
  for (const auto& dir : dirs) {
    const std::string id = dir.filename().string();
    auto mri = FindNifti(dir, "mri");
    auto ct = FindNifti(dir, "ct");
    if (!mri || !ct) {
      manifest.exclusions.push_back(
          {id, !mri && !ct ? "missing MRI and CT" : !mri ? "missing MRI" : "missing CT"});
      continue;
    }
    const auto meta_path = dir / "patient.txt";
    if (!std::filesystem::is_regular_file(meta_path)) {
      manifest.exclusions.push_back({id, "missing patient.txt"});
      continue;
    }
    PatientRecord record;
    record.patient_id = id;
    try {
      const auto meta = ParseKeyValue(ReadTextFile(meta_path));
      const auto region = meta.find("region");
      const auto hospital = meta.find("hospital");
      if (region == meta.end() || hospital == meta.end()) {
        Fail(ErrorCode::kFormat, "patient.txt needs region and hospital");
      }
      record.region = ParseRegion(region->second);
      record.hospital = ParseHospital(hospital->second);
    } catch (const Error& e) {
      manifest.exclusions.push_back({id, std::string("bad metadata: ") + e.what()});
      continue;
    }
    record.mri_path = *mri;
    record.ct_path = *ct;
    record.mask_path = FindNifti(dir, "mask");

    const Dims mri_dims = ReadNiftiGeometry(record.mri_path).dims;
    const Dims ct_dims = ReadNiftiGeometry(record.ct_path).dims;
    if (mri_dims != ct_dims) {
      Fail(ErrorCode::kPairing, "patient " + id + ": MRI dims " +
                                    ShapeString(mri_dims) + " differ from CT dims " +
                                    ShapeString(ct_dims));
    }
    manifest.records.push_back(std::move(record));
  }
  return manifest;
}

void SplitRatios::Validate() const {
  for (double r : as_array()) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      Fail(ErrorCode::kInvalidArgument, "split ratios must be positive");
    }
  }
  if (std::abs(train + val + test - 1.0) > 1e-9) {
    Fail(ErrorCode::kInvalidArgument, "split ratios must sum to 1");
  }
}

std::vector<std::string> SplitAssignment::PatientsIn(Split split) const {
  std::vector<std::string> ids;
  for (const auto& [id, s] : assignment) {
    if (s == split) ids.push_back(id);
  }
  return ids;
}

std::array<std::size_t, 3> ApportionLargestRemainder(std::size_t n,
                                                     const SplitRatios& ratios) {
  const auto r = ratios.as_array();
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double quota = r[i] * static_cast<double>(n);
    // Slack so 0.15 * 60 floors to 9 rather than 8.
    counts[i] = static_cast<std::size_t>(std::floor(quota + 1e-9));
    remainder[i] = quota - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  while (assigned > n) {
    // Only reachable through rounding slack; take back from the smallest
    // remainder.
    int victim = 0;
    for (int i = 1; i < 3; ++i) {
      if (counts[i] > 0 && (counts[victim] == 0 || remainder[i] < remainder[victim])) {
        victim = i;
      }
    }
    --counts[victim];
    --assigned;
  }
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) {
    ++counts[order[k % 3]];
  }
  return counts;
}

SplitAssignment StratifiedSplit(std::span<const PatientRecord> records,
                                const SplitRatios& ratios, std::uint64_t seed) {
  ratios.Validate();
  std::map<std::pair<Region, Hospital>, std::vector<std::string>> strata;
  std::set<std::string> seen;
  for (const auto& rec : records) {
    if (!seen.insert(rec.patient_id).second) {
      Fail(ErrorCode::kInvalidArgument, "duplicate patient id " + rec.patient_id);
    }
    strata[{rec.region, rec.hospital}].push_back(rec.patient_id);
  }

  SplitAssignment out;
  out.seed = seed;
  out.ratios = ratios;
  for (auto& [key, ids] : strata) {
    const std::string stratum = std::string(RegionName(key.first)) + "/" +
                                std::string(HospitalName(key.second));
    std::sort(ids.begin(), ids.end());
    Xoshiro256StarStar rng(DeriveSeed(seed, stratum));
    rng.Shuffle(ids);
    if (ids.size() < 3) {
      out.warnings.push_back("stratum " + stratum + " has " +
                             std::to_string(ids.size()) +
                             " patients, fewer than the 3 splits");
    }
    const auto counts = ApportionLargestRemainder(ids.size(), ratios);
    std::size_t pos = 0;
    for (int s = 0; s < 3; ++s) {
      for (std::size_t c = 0; c < counts[s]; ++c) {
        out.assignment[ids[pos++]] = static_cast<Split>(s);
      }
    }
  }
  return out;
}

std::string SplitToCsv(const SplitAssignment& split) {
  std::string out = "patient_id,split\n";
  for (const auto& [id, s] : split.assignment) {
    out += id;
    out += ',';
    out += SplitName(s);
    out += '\n';
  }
  return out;
}

std::map<std::string, Split> ParseSplitCsv(std::string_view text) {
  std::map<std::string, Split> out;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = Trim(line);
    if (row.empty()) continue;
    if (header) {
      if (row != "patient_id,split") {
        Fail(ErrorCode::kFormat, "split CSV must start with 'patient_id,split'");
      }
      header = false;
      continue;
    }
    const auto comma = row.find(',');
    if (comma == std::string_view::npos) {
      Fail(ErrorCode::kFormat, "split CSV line " + std::to_string(line_no) +
                                   ": expected patient_id,split");
    }
    const std::string id(Trim(row.substr(0, comma)));
    if (!out.emplace(id, ParseSplit(row.substr(comma + 1))).second) {
      Fail(ErrorCode::kFormat, "split CSV lists " + id + " twice");
    }
  }
  if (header) Fail(ErrorCode::kFormat, "split CSV is empty");
  return out;
}

std::map<std::string, Split> ReadSplitCsv(const std::filesystem::path& path) {
  return ParseSplitCsv(ReadTextFile(path));
}

std::string ManifestToCsv(const Manifest& manifest) {
  std::string out = "patient_id,region,hospital,mri_path,ct_path,mask_path\n";
  for (const auto& r : manifest.records) {
    out += r.patient_id + "," + std::string(RegionName(r.region)) + "," +
           std::string(HospitalName(r.hospital)) + "," + r.mri_path.string() +
           "," + r.ct_path.string() + "," +
           (r.mask_path ? r.mask_path->string() : std::string()) + "\n";
  }
  return out;
}

std::vector<SlicePair> PairSlices(const Volume& mri, const Volume& ct) {
  if (mri.dims() != ct.dims()) {
    Fail(ErrorCode::kPairing, "MRI dims " + ShapeString(mri.dims()) +
                                  " differ from CT dims " + ShapeString(ct.dims()));
  }
  std::vector<SlicePair> pairs;
  pairs.reserve(mri.dims().nz);
  for (std::size_t z = 0; z < mri.dims().nz; ++z) {
    pairs.push_back({ExtractTransverseSlice(mri, z), ExtractTransverseSlice(ct, z)});
  }
  return pairs;
}

std::vector<SlicePair> PairSlices(const PatientRecord& record) {
  if (record.mri_path == record.ct_path) {
    Fail(ErrorCode::kPairing, "patient " + record.patient_id +
                                  ": MRI and CT paths are identical");
  }
  const Volume mri = ReadNifti(record.mri_path, ValueKind::kRawIntensity);
  const Volume ct = ReadNifti(record.ct_path, ValueKind::kHounsfield);
  try {
    return PairSlices(mri, ct);
  } catch (const Error& e) {
    throw Error(e.code(), "patient " + record.patient_id + ": " + e.what());
  }
}

}  // namespace sctk
