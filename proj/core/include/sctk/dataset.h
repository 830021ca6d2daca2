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

// Patient manifests, stratified per-patient splits and slice pairing.
//
// Dataset layout:
//
//   <root>/<patient_id>/mri.nii.gz   (or mri.nii)
//   <root>/<patient_id>/ct.nii.gz    (or ct.nii)
//   <root>/<patient_id>/mask.nii.gz  optional 3D label mask
//   <root>/<patient_id>/patient.txt  key=value lines: region=brain|pelvis,
//                                    hospital=A|B|C
//
// Splits are serialized as CSV with a "patient_id,split" header.

#ifndef SCTK_DATASET_H_
#define SCTK_DATASET_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sctk/volume.h"

namespace sctk {

enum class Region { kBrain, kPelvis };
enum class Hospital { kA, kB, kC };
enum class Split { kTrain, kVal, kTest };

std::string_view RegionName(Region r);
std::string_view HospitalName(Hospital h);
std::string_view SplitName(Split s);
Region ParseRegion(std::string_view text);
Hospital ParseHospital(std::string_view text);
Split ParseSplit(std::string_view text);

struct PatientRecord {
  std::string patient_id;
  Region region = Region::kBrain;
  Hospital hospital = Hospital::kA;
  std::filesystem::path mri_path;
  std::filesystem::path ct_path;
  std::optional<std::filesystem::path> mask_path;
};

struct ManifestExclusion {
  std::string patient_id;
  std::string reason;
};

struct Manifest {
  std::vector<PatientRecord> records;  // sorted by patient_id
  std::vector<ManifestExclusion> exclusions;
};

// Scans root for patient directories. Patients missing a modality or the
// metadata sidecar are excluded and reported. Throws kIo when root is
// unreadable and kPairing (naming the patient) when MRI and CT dims differ.
Manifest BuildManifest(const std::filesystem::path& root);

// Finds <dir>/<stem>.nii.gz or <dir>/<stem>.nii.
std::optional<std::filesystem::path> FindNifti(const std::filesystem::path& dir,
                                               std::string_view stem);

struct SplitRatios {
  double train = 0.7;
  double val = 0.15;
  double test = 0.15;

  std::array<double, 3> as_array() const { return {train, val, test}; }
  // Positive ratios summing to 1 within 1e-9.
  void Validate() const;
};

struct SplitAssignment {
  std::map<std::string, Split> assignment;
  std::uint64_t seed = 0;
  SplitRatios ratios;
  std::vector<std::string> warnings;

  std::vector<std::string> PatientsIn(Split split) const;
};

// Largest-remainder apportionment of n items over ratios. Ties in the
// fractional remainder go to the earlier split (train, val, test).
std::array<std::size_t, 3> ApportionLargestRemainder(std::size_t n,
                                                     const SplitRatios& ratios);

// Shuffles each (region, hospital) stratum with a stream derived from
// (seed, stratum key) and apportions it by largest remainder. The result
// does not depend on the order of `records`.
SplitAssignment StratifiedSplit(std::span<const PatientRecord> records,
                                const SplitRatios& ratios, std::uint64_t seed);

std::string SplitToCsv(const SplitAssignment& split);
std::map<std::string, Split> ParseSplitCsv(std::string_view text);
std::map<std::string, Split> ReadSplitCsv(const std::filesystem::path& path);

std::string ManifestToCsv(const Manifest& manifest);

struct SlicePair {
  Slice source;  // MRI
  Slice target;  // CT
};

// Slice z of MRI paired with slice z of CT. kPairing on dims mismatch.
std::vector<SlicePair> PairSlices(const Volume& mri, const Volume& ct);
std::vector<SlicePair> PairSlices(const PatientRecord& record);

// Parses `key=value` lines; '#' starts a comment, blank lines are skipped.
std::map<std::string, std::string> ParseKeyValue(std::string_view text);

}  // namespace sctk

#endif  // SCTK_DATASET_H_
