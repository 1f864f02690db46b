// Copyright 2026 The qrelx Authors
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

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>

#include "qrelx/kernels.hpp"
#include "qrelx/vectorspace.hpp"

namespace qrelx {

/// Mean plus an orthonormal basis of principal directions, rows ordered by
/// descending explained variance. Immutable after fit_pca.
struct PcaModel {
  Eigen::VectorXd mean;                // V
  Eigen::MatrixXd components;          // k x V, orthonormal rows
  Eigen::VectorXd explained_variance;  // k, non-increasing

  std::size_t k() const noexcept { return static_cast<std::size_t>(components.rows()); }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

struct PcaOptions {
  /// Extra columns of the randomized range finder.
  int oversample = 10;
  int power_iterations = 4;
  std::uint64_t seed = 0x51ed270b0b5eedULL;
};

/// Fits min(k, V, n) components to the mean-centered rows. Small problems are
/// solved by an exact thin SVD of the centered data; larger ones by randomized
/// subspace iteration with implicit centering, so the sparse input is never
/// densified. Explained variances use the n - 1 denominator. Each component is
/// sign-normalised so that its largest-magnitude coordinate is positive.
PcaModel fit_pca(std::span<const SparseVector> vectors, std::size_t n_features, std::size_t k,
                 const PcaOptions& options = {});

/// components * (v - mean). Throws std::invalid_argument for indices >= V.
DenseVector project(const PcaModel& model, const SparseVector& v);

/// Scores for many rows at once (parallel kernel).
RowMatrix project_all(const PcaModel& model, std::span<const SparseVector> vectors);

/// mean + components^T * scores.
Eigen::VectorXd reconstruct(const PcaModel& model, std::span<const double> scores);

}  // namespace qrelx
