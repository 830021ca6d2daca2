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

#ifndef SCTK_FRECHET_H_
#define SCTK_FRECHET_H_

#include <cstddef>
#include <vector>

#include "sctk/embedding.h"

namespace sctk {

inline constexpr double kCovarianceRegularization = 1e-6;
inline constexpr double kCovarianceEigenFloor = 1e-9;

// Mean and covariance of a d-dimensional Gaussian; covariance is row-major
// d x d, symmetric and positive semidefinite.
struct GaussianStats {
  std::size_t dim = 0;
  std::vector<double> mean;
  std::vector<double> covariance;
  bool regularized = false;

  double cov(std::size_t i, std::size_t j) const { return covariance[i * dim + j]; }
};

// Sample mean and unbiased (n - 1) covariance, symmetrized. When the
// smallest eigenvalue falls below kCovarianceEigenFloor the covariance gets
// kCovarianceRegularization * I added. kInsufficientData for < 2 vectors.
GaussianStats FitGaussian(const EmbeddingSet& embeddings);

// ||mu_a - mu_b||^2 + Tr(S_a + S_b - 2 (S_a^1/2 S_b S_a^1/2)^1/2), with
// matrix square roots from a symmetric eigendecomposition (negative
// eigenvalues clipped to 0) and the result clamped at 0. kDimension on
// mismatched dims, kNumeric on non-finite entries.
double FrechetDistance(const GaussianStats& a, const GaussianStats& b);

// Square root of a symmetric PSD matrix (row-major n x n), eigenvalues
// clipped at 0.
std::vector<double> SymmetricPsdSqrt(const std::vector<double>& matrix, std::size_t n);

}  // namespace sctk

#endif  // SCTK_FRECHET_H_
