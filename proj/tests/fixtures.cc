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

#include "fixtures.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sctk/nifti.h"
#include "sctk/seg_eval.h"
#include "sctk/slices.h"

namespace sctk::testing {

namespace fs = std::filesystem;

fs::path ScratchDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sctk_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

VolumeGeometry MakeGeometry(std::size_t nx, std::size_t ny, std::size_t nz,
                            std::array<float, 3> spacing) {
  VolumeGeometry g;
  g.dims = {nx, ny, nz};
  g.spacing = spacing;
  g.orientation.qform_code = 1;
  g.orientation.sform_code = 1;
  g.orientation.srow_x = {spacing[0], 0.0f, 0.0f, -10.0f};
  g.orientation.srow_y = {0.0f, spacing[1], 0.0f, -12.5f};
  g.orientation.srow_z = {0.0f, 0.0f, spacing[2], 3.0f};
  g.orientation.qoffset = {-10.0f, -12.5f, 3.0f};
  return g;
}

Volume ConstantVolume(const VolumeGeometry& g, ValueKind kind, double value) {
  return Volume(g, kind, std::vector<double>(g.dims.voxel_count(), value));
}

Volume RandomVolume(const VolumeGeometry& g, ValueKind kind, double lo, double hi,
                    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(g.dims.voxel_count());
  for (double& x : v) x = u(rng);
  return Volume(g, kind, std::move(v));
}

Volume PhantomCt(const VolumeGeometry& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double phase = 2.0 * std::numbers::pi * u(rng);
  const double fx = 2.0 + 2.0 * u(rng);
  const double fy = 2.0 + 2.0 * u(rng);
  const double blob = 0.15 + 0.1 * u(rng);
  const Dims& d = g.dims;
  std::vector<double> v(d.voxel_count());
  for (std::size_t z = 0; z < d.nz; ++z) {
    const double t = static_cast<double>(z) / static_cast<double>(std::max<std::size_t>(d.nz, 2) - 1);
    const double rx = 0.42 * (1.0 + 0.08 * std::sin(2.0 * std::numbers::pi * t + phase));
    const double ry = 0.36 * (1.0 + 0.08 * std::cos(2.0 * std::numbers::pi * t + phase));
    const double bx = 0.5 + 0.15 * std::cos(phase + 3.0 * t);
    const double by = 0.5 + 0.12 * std::sin(phase + 2.0 * t);
    for (std::size_t y = 0; y < d.ny; ++y) {
      for (std::size_t x = 0; x < d.nx; ++x) {
        const double px = (static_cast<double>(x) + 0.5) / static_cast<double>(d.nx);
        const double py = (static_cast<double>(y) + 0.5) / static_cast<double>(d.ny);
        const double ex = (px - 0.5) / rx;
        const double ey = (py - 0.5) / ry;
        const double r = std::sqrt(ex * ex + ey * ey);
        double hu = -1000.0;
        if (r < 1.0) {
          hu = 40.0 + 60.0 * std::sin(fx * 2.0 * std::numbers::pi * px + phase) *
                          std::cos(fy * 2.0 * std::numbers::pi * py + t);
          if (r > 0.82) hu = 900.0 + 300.0 * (r - 0.82) / 0.18;
          const double dx = px - bx;
          const double dy = py - by;
          if (std::sqrt(dx * dx + dy * dy) < blob * 0.5) hu = -800.0;
        }
        v[(z * d.ny + y) * d.nx + x] = hu;
      }
    }
  }
  return Volume(g, ValueKind::kHounsfield, std::move(v));
}

Volume PhantomMri(const Volume& ct) {
  const Dims& d = ct.dims();
  std::vector<double> v(ct.voxels().size());
  for (std::size_t z = 0; z < d.nz; ++z) {
    for (std::size_t y = 0; y < d.ny; ++y) {
      for (std::size_t x = 0; x < d.nx; ++x) {
        const double hu = ct.at(x, y, z);
        const double tissue = hu < -500.0 ? 5.0 : hu > 500.0 ? 120.0 : 600.0 + hu;
        const double bias = 1.0 + 0.2 * static_cast<double>(x) / static_cast<double>(d.nx);
        v[(z * d.ny + y) * d.nx + x] = tissue * bias;
      }
    }
  }
  return Volume(ct.geometry(), ValueKind::kRawIntensity, std::move(v));
}

Volume AddNoise(const Volume& normalized, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, sigma);
  std::vector<double> v(normalized.voxels().begin(), normalized.voxels().end());
  for (double& x : v) x = std::clamp(x + n(rng), 0.0, 1.0);
  return Volume(normalized.geometry(), ValueKind::kNormalized, std::move(v));
}

std::vector<std::uint16_t> PhantomLabels(const Volume& ct) {
  std::vector<std::uint16_t> labels;
  labels.reserve(ct.voxels().size());
  for (double hu : ct.voxels()) {
    std::uint16_t l = 0;
    if (hu >= 500.0) {
      l = 2;
    } else if (hu > -500.0) {
      l = 1;
    } else if (hu > -900.0) {
      l = 3;
    }
    labels.push_back(l);
  }
  return labels;
}

std::map<std::uint16_t, std::string> PhantomLabelNames() {
  return {{1, "soft_tissue"}, {2, "bone"}, {3, "air_pocket"}};
}

namespace {

void WriteMasks(const fs::path& dir, const Volume& ct) {
  LabelMaskVolume mask;
  mask.geometry = ct.geometry();
  mask.labels = PhantomLabels(ct);
  mask.label_names = PhantomLabelNames();
  WriteLabelMask(mask, dir / "mask.nii.gz");
  WriteLabelMask(mask, dir / "mask2d.nii.gz");
}

}  // namespace

void WritePatient(const fs::path& root, const SyntheticPatient& p) {
  const fs::path dir = root / p.id;
  fs::create_directories(dir);
  WriteNifti(p.ct, dir / "ct.nii.gz");
  WriteNifti(p.mri, dir / "mri.nii.gz");
  WriteFile(dir / "patient.txt", "region=" + std::string(RegionName(p.region)) +
                                     "\nhospital=" + std::string(HospitalName(p.hospital)) +
                                     "\n");
  if (p.with_masks) WriteMasks(dir, p.ct);
}

void WritePrediction(const fs::path& predictions, const std::string& model,
                     const std::string& id, const Volume& pred, bool as_slices,
                     const Volume* labels_from_ct) {
  const fs::path dir = predictions / model / id;
  fs::create_directories(dir);
  if (as_slices) {
    WriteSliceStack(ExtractTransverseSlices(pred), pred.geometry(), dir / "slices");
  } else {
    WriteNifti(pred, dir / "sct.nii.gz");
  }
  if (labels_from_ct != nullptr) WriteMasks(dir, *labels_from_ct);
}

std::string ConfigText(const fs::path& dataset, const fs::path& split_csv,
                       const fs::path& predictions, const fs::path& output,
                       const std::vector<std::string>& models, const std::string& extra) {
  std::string list;
  for (const auto& m : models) list += (list.empty() ? "" : ",") + m;
  return "dataset_root = " + dataset.string() + "\nsplit_csv = " + split_csv.string() +
         "\npredictions = " + predictions.string() + "\noutput_dir = " + output.string() +
         "\nmodels = " + list + "\n" + extra;
}

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace sctk::testing
