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

#include "sctk/frechet.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "sctk/error.h"

namespace sctk {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::MatrixXd ToMatrix(const std::vector<double>& values, std::size_t n) {
  return Eigen::Map<const RowMatrix>(values.data(), static_cast<Eigen::Index>(n),
                                     static_cast<Eigen::Index>(n));
}

Eigen::MatrixXd PsdSqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    Fail(ErrorCode::kNumeric, "eigendecomposition did not converge");
  }
  const Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().transpose();
}

void CheckFinite(const GaussianStats& g, const char* which) {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(g.mean.begin(), g.mean.end(), finite) ||
      !std::all_of(g.covariance.begin(), g.covariance.end(), finite)) {
    Fail(ErrorCode::kNumeric, std::string("non-finite entries in Gaussian ") + which);
  }
}

}  // namespace

GaussianStats FitGaussian(const EmbeddingSet& embeddings) {
  const std::size_t n = embeddings.count();
  const std::size_t d = embeddings.dim();
  if (n < 2) {
    Fail(ErrorCode::kInsufficientData,
         "need at least 2 embeddings to fit a Gaussian, got " + std::to_string(n));
  }
  const Eigen::Map<const RowMatrix> x(embeddings.values().data(),
                                      static_cast<Eigen::Index>(n),
                                      static_cast<Eigen::Index>(d));
  const Eigen::RowVectorXd mu = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mu;
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  cov = 0.5 * (cov + cov.transpose()).eval();

  GaussianStats stats;
  stats.dim = d;
  stats.mean.assign(mu.data(), mu.data() + d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success || !std::isfinite(solver.eigenvalues().minCoeff())) {
    Fail(ErrorCode::kNumeric, "covariance eigendecomposition failed");
  }
  if (solver.eigenvalues().minCoeff() < kCovarianceEigenFloor) {
    cov.diagonal().array() += kCovarianceRegularization;
    stats.regularized = true;
  }
  stats.covariance.resize(d * d);
  Eigen::Map<RowMatrix>(stats.covariance.data(), static_cast<Eigen::Index>(d),
                        static_cast<Eigen::Index>(d)) = cov;
  return stats;
}

std::vector<double> SymmetricPsdSqrt(const std::vector<double>& matrix, std::size_t n) {
  if (matrix.size() != n * n) Fail(ErrorCode::kDimension, "matrix is not n x n");
  const Eigen::MatrixXd root = PsdSqrt(ToMatrix(matrix, n));
  std::vector<double> out(n * n);
  Eigen::Map<RowMatrix>(out.data(), static_cast<Eigen::Index>(n),
                        static_cast<Eigen::Index>(n)) = root;
  return out;
}

double FrechetDistance(const GaussianStats& a, const GaussianStats& b) {
  if (a.dim != b.dim || a.mean.size() != a.dim || b.mean.size() != b.dim ||
      a.covariance.size() != a.dim * a.dim || b.covariance.size() != b.dim * b.dim) {
    Fail(ErrorCode::kDimension, "Gaussian dimensions differ: " + std::to_string(a.dim) +
                                    " vs " + std::to_string(b.dim));
  }
  CheckFinite(a, "a");
  CheckFinite(b, "b");
  const std::size_t d = a.dim;
  const Eigen::Map<const Eigen::VectorXd> mu_a(a.mean.data(), static_cast<Eigen::Index>(d));
  const Eigen::Map<const Eigen::VectorXd> mu_b(b.mean.data(), static_cast<Eigen::Index>(d));
  const Eigen::MatrixXd sa = ToMatrix(a.covariance, d);
  const Eigen::MatrixXd sb = ToMatrix(b.covariance, d);

  const Eigen::MatrixXd sa_root = PsdSqrt(sa);
  Eigen::MatrixXd inner = sa_root * sb * sa_root;
  inner = 0.5 * (inner + inner.transpose()).eval();
  // Tr(sqrt(M)) is the sum of the square roots of M's eigenvalues.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(inner, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    Fail(ErrorCode::kNumeric, "eigendecomposition did not converge");
  }
  const double trace_root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

  const double distance =
      (mu_a - mu_b).squaredNorm() + sa.trace() + sb.trace() - 2.0 * trace_root;
  if (!std::isfinite(distance)) Fail(ErrorCode::kNumeric, "Frechet distance is not finite");
  return std::max(distance, 0.0);
}

}  // namespace sctk
