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

#include "qrelx/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qrelx {

CsrMatrix CsrMatrix::from_rows(std::span<const SparseVector> rows, std::size_t cols) {
  CsrMatrix m;
  m.rows = rows.size();
  m.cols = cols;
  m.row_ptr.reserve(rows.size() + 1);
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.nnz(); ++k) {
      if (r.indices[k] >= cols) {
        throw std::invalid_argument("sparse index " + std::to_string(r.indices[k]) + " out of range for dimension " +
                                    std::to_string(cols));
      }
      m.col_idx.push_back(r.indices[k]);
      m.values.push_back(r.weights[k]);
    }
    m.row_ptr.push_back(m.values.size());
  }
  return m;
}

CsrMatrix CsrMatrix::transposed() const {
  CsrMatrix t;
  t.rows = cols;
  t.cols = rows;
  t.row_ptr.assign(cols + 1, 0);
  for (auto c : col_idx) ++t.row_ptr[c + 1];
  for (std::size_t i = 0; i < cols; ++i) t.row_ptr[i + 1] += t.row_ptr[i];
  t.col_idx.resize(nnz());
  t.values.resize(nnz());
  std::vector<std::size_t> fill(t.row_ptr.begin(), t.row_ptr.end() - 1);
  // Ascending source rows keep each transposed row sorted.
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      const std::size_t dst = fill[col_idx[k]]++;
      t.col_idx[dst] = static_cast<std::uint32_t>(r);
      t.values[dst] = values[k];
    }
  }
  return t;
}

namespace kernels {

Eigen::MatrixXd spmm(const CsrMatrix& a, const Eigen::MatrixXd& b) {
  if (static_cast<std::size_t>(b.rows()) != a.cols) throw std::invalid_argument("spmm: dimension mismatch");
  const auto l = b.cols();
  // Row-major scratch so each output row is contiguous for its thread.
  RowMatrix out = RowMatrix::Zero(static_cast<Eigen::Index>(a.rows), l);
  const RowMatrix br = b;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(a.rows); ++i) {
    double* dst = out.row(i).data();
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const double v = a.values[k];
      const double* src = br.row(a.col_idx[k]).data();
      for (Eigen::Index j = 0; j < l; ++j) dst[j] += v * src[j];
    }
  }
  return out;
}

RowMatrix project_rows(const CsrMatrix& a, const Eigen::MatrixXd& components,
                       const Eigen::VectorXd& component_dot_mean) {
  if (static_cast<std::size_t>(components.cols()) != a.cols) {
    throw std::invalid_argument("project_rows: dimension mismatch");
  }
  const auto k = components.rows();
  // Column-major components: column t is the t-th coordinate of every component.
  RowMatrix out(static_cast<Eigen::Index>(a.rows), k);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(a.rows); ++i) {
    double* dst = out.row(i).data();
    for (Eigen::Index j = 0; j < k; ++j) dst[j] = 0.0;
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      const double v = a.values[p];
      const double* col = components.col(a.col_idx[p]).data();
      for (Eigen::Index j = 0; j < k; ++j) dst[j] += v * col[j];
    }
    for (Eigen::Index j = 0; j < k; ++j) dst[j] -= component_dot_mean[j];
  }
  return out;
}

std::vector<double> row_squared_norms(const RowMatrix& m) {
  std::vector<double> sq(static_cast<std::size_t>(m.rows()));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m.rows()); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
    sq[i] = s;
  }
  return sq;
}

std::vector<double> min_cosine_distances(const RowMatrix& rows, std::span<const double> squared_norms,
                                         std::span<const MinDistanceJob> jobs) {
  std::vector<double> out(jobs.size());
  const auto dim = rows.cols();
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(jobs.size()); ++j) {
    const auto& job = jobs[j];
    const double* x = rows.row(static_cast<Eigen::Index>(job.candidate)).data();
    const double xx = squared_norms[job.candidate];
    double best = std::numeric_limits<double>::infinity();
    for (auto r : job.references) {
      const double yy = squared_norms[r];
      double d = 1.0;
      if (xx != 0.0 && yy != 0.0) {
        const double* y = rows.row(static_cast<Eigen::Index>(r)).data();
        double dot = 0.0;
        for (Eigen::Index t = 0; t < dim; ++t) dot += x[t] * y[t];
        d = std::clamp(1.0 - dot / std::sqrt(xx * yy), 0.0, 2.0);
      }
      best = std::min(best, d);
    }
    out[j] = best;
  }
  return out;
}

namespace reference {

Eigen::MatrixXd spmm(const CsrMatrix& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.rows), b.cols());
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      out.row(static_cast<Eigen::Index>(i)) += a.values[k] * b.row(a.col_idx[k]);
    }
  }
  return out;
}

RowMatrix project_rows(const CsrMatrix& a, const Eigen::MatrixXd& components,
                       const Eigen::VectorXd& component_dot_mean) {
  RowMatrix out(static_cast<Eigen::Index>(a.rows), components.rows());
  for (std::size_t i = 0; i < a.rows; ++i) {
    Eigen::VectorXd dense = Eigen::VectorXd::Zero(components.cols());
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) dense[a.col_idx[p]] = a.values[p];
    out.row(static_cast<Eigen::Index>(i)) = (components * dense - component_dot_mean).transpose();
  }
  return out;
}

std::vector<double> min_cosine_distances(const RowMatrix& rows, std::span<const MinDistanceJob> jobs) {
  std::vector<double> out;
  out.reserve(jobs.size());
  const auto dim = static_cast<std::size_t>(rows.cols());
  for (const auto& job : jobs) {
    std::span<const double> x(rows.row(static_cast<Eigen::Index>(job.candidate)).data(), dim);
    double best = std::numeric_limits<double>::infinity();
    for (auto r : job.references) {
      std::span<const double> y(rows.row(static_cast<Eigen::Index>(r)).data(), dim);
      best = std::min(best, cosine_distance(x, y));
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace reference
}  // namespace kernels
}  // namespace qrelx
