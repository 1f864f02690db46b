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

// Data-parallel inner loops. Every kernel has an OpenMP version (kernels::) and
// a plain serial version (kernels::reference::) kept for testing and
// benchmarking. Each output element is produced by exactly one thread with a
// fixed summation order, so results do not depend on the thread count.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "qrelx/vectorspace.hpp"

namespace qrelx {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Compressed sparse rows.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> col_idx;
  std::vector<double> values;

  /// Throws std::invalid_argument when an index is >= cols.
  static CsrMatrix from_rows(std::span<const SparseVector> rows, std::size_t cols);
  CsrMatrix transposed() const;
  std::size_t nnz() const noexcept { return values.size(); }
};

/// One candidate row scored against a set of reference rows.
struct MinDistanceJob {
  std::size_t candidate;
  std::span<const std::size_t> references;
};

namespace kernels {

/// a * b, with a sparse (r x c) and b dense (c x l).
Eigen::MatrixXd spmm(const CsrMatrix& a, const Eigen::MatrixXd& b);

/// Rows of (a_i - mean) * components^T, i.e. PCA scores for every sparse row.
/// `components` is k x c; `component_dot_mean` holds components * mean.
RowMatrix project_rows(const CsrMatrix& a, const Eigen::MatrixXd& components,
                       const Eigen::VectorXd& component_dot_mean);

/// Squared Euclidean norm of every row.
std::vector<double> row_squared_norms(const RowMatrix& m);

/// For each job, min over references r of 1 - cos(row(candidate), row(r)).
/// Zero-norm rows are at distance 1 from everything. Same arithmetic as
/// cosine_distance, so results match it bit for bit.
std::vector<double> min_cosine_distances(const RowMatrix& rows, std::span<const double> squared_norms,
                                         std::span<const MinDistanceJob> jobs);

namespace reference {

Eigen::MatrixXd spmm(const CsrMatrix& a, const Eigen::MatrixXd& b);
RowMatrix project_rows(const CsrMatrix& a, const Eigen::MatrixXd& components,
                       const Eigen::VectorXd& component_dot_mean);
std::vector<double> min_cosine_distances(const RowMatrix& rows, std::span<const MinDistanceJob> jobs);

}  // namespace reference
}  // namespace kernels
}  // namespace qrelx
