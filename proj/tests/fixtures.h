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

// Synthetic volumes and on-disk datasets shared by the unit and acceptance
// tests.

#ifndef SCTK_TESTS_FIXTURES_H_
#define SCTK_TESTS_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "sctk/config.h"
#include "sctk/dataset.h"
#include "sctk/volume.h"

namespace sctk::testing {

// Fresh empty directory under the system temp dir.
std::filesystem::path ScratchDir(const std::string& name);

VolumeGeometry MakeGeometry(std::size_t nx, std::size_t ny, std::size_t nz,
                            std::array<float, 3> spacing = {1.0f, 1.0f, 2.0f});

Volume ConstantVolume(const VolumeGeometry& g, ValueKind kind, double value);

// Uniform voxels in [lo, hi].
Volume RandomVolume(const VolumeGeometry& g, ValueKind kind, double lo, double hi,
                    std::mt19937_64& rng);

// Smooth HU phantom: body ellipse with a bone ring and soft tissue blobs
// whose size and position drift with z.
Volume PhantomCt(const VolumeGeometry& g, std::uint64_t seed);

// MRI-like intensity derived from a CT phantom (monotone remap plus a bias
// field), in arbitrary positive units.
Volume PhantomMri(const Volume& ct);

// Normalized-scale copy of `gt` plus N(0, sigma) noise, clipped to [0, 1].
Volume AddNoise(const Volume& normalized, double sigma, std::mt19937_64& rng);

// Three-label (1 body, 2 bone, 3 air pocket) mask from a CT phantom.
std::vector<std::uint16_t> PhantomLabels(const Volume& ct);

struct SyntheticPatient {
  std::string id;
  Region region = Region::kBrain;
  Hospital hospital = Hospital::kA;
  Volume ct;
  Volume mri;
  bool with_masks = true;
};

// Writes <root>/<id>/{mri,ct}.nii.gz, patient.txt and, when requested,
// mask.nii.gz and mask2d.nii.gz with label sidecars.
void WritePatient(const std::filesystem::path& root, const SyntheticPatient& p);

// Names of the mask labels written by WritePatient.
std::map<std::uint16_t, std::string> PhantomLabelNames();

// Writes a prediction for a model. `pred` is stored as sct.nii.gz, or as a
// slice stack when `as_slices`. Masks are derived from `pred_labels_from`
// (a CT-scale volume) when it is non-empty.
void WritePrediction(const std::filesystem::path& predictions, const std::string& model,
                     const std::string& id, const Volume& pred, bool as_slices,
                     const Volume* labels_from_ct);

// Minimal config text for a dataset laid out by the helpers above.
std::string ConfigText(const std::filesystem::path& dataset,
                       const std::filesystem::path& split_csv,
                       const std::filesystem::path& predictions,
                       const std::filesystem::path& output,
                       const std::vector<std::string>& models,
                       const std::string& extra = "");

void WriteFile(const std::filesystem::path& path, const std::string& text);
std::string ReadFile(const std::filesystem::path& path);

}  // namespace sctk::testing

#endif  // SCTK_TESTS_FIXTURES_H_
