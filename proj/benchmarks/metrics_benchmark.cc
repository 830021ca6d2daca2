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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sctk/embedding.h"
#include "sctk/frechet.h"
#include "sctk/nifti.h"
#include "sctk/simos.h"
#include "sctk/ssim.h"

namespace sctk {
namespace {

VolumeGeometry Geometry(std::size_t nx, std::size_t ny, std::size_t nz) {
  VolumeGeometry g;
  g.dims = {nx, ny, nz};
  return g;
}

Volume RandomVolume(std::size_t nx, std::size_t ny, std::size_t nz, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(nx * ny * nz);
  for (double& x : v) x = u(rng);
  return Volume(Geometry(nx, ny, nz), ValueKind::kNormalized, std::move(v));
}

Slice RandomSlice(std::size_t n, std::uint64_t seed) {
  const Volume v = RandomVolume(n, n, 1, seed);
  Slice s;
  s.nx = s.ny = n;
  s.pixels.assign(v.voxels().begin(), v.voxels().end());
  return s;
}

void BM_Ssim(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Slice a = RandomSlice(n, 1);
  const Slice b = RandomSlice(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Ssim(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_Ssim)->Arg(64)->Arg(256);

void BM_Simos(benchmark::State& state) {
  const auto nz = static_cast<std::size_t>(state.range(0));
  const Volume a = RandomVolume(256, 256, nz, 3);
  const Volume b = RandomVolume(256, 256, nz, 4);
  for (auto _ : state) benchmark::DoNotOptimize(Simos(a, b));
}
BENCHMARK(BM_Simos)->Arg(16)->Arg(64);

void BM_Frechet(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<double> a(4 * dim * dim), b(4 * dim * dim);
  for (double& x : a) x = g(rng);
  for (double& x : b) x = g(rng) + 0.1;
  const GaussianStats sa = FitGaussian(EmbeddingSet(dim, a, "bench"));
  const GaussianStats sb = FitGaussian(EmbeddingSet(dim, b, "bench"));
  for (auto _ : state) benchmark::DoNotOptimize(FrechetDistance(sa, sb));
}
BENCHMARK(BM_Frechet)->Arg(64)->Arg(256);

void BM_NiftiDecode(benchmark::State& state) {
  const Volume v = RandomVolume(128, 128, 32, 6);
  auto bytes = EncodeNifti(v);
  if (state.range(0) == 1) bytes = GzipBytes(bytes);
  for (auto _ : state) benchmark::DoNotOptimize(DecodeNifti(bytes));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes.size()));
}
BENCHMARK(BM_NiftiDecode)->Arg(0)->Arg(1);

}  // namespace
}  // namespace sctk

BENCHMARK_MAIN();
