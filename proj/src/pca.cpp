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

#include "qrelx/pca.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qrelx/random.hpp"

namespace qrelx {
namespace {

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

// Largest-magnitude coordinate positive; first index wins on ties.
void canonicalize_signs(Eigen::MatrixXd& basis) {
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < basis.rows(); ++r) {
      const double a = std::abs(basis(r, c));
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
    if (basis.rows() > 0 && basis(best, c) < 0.0) basis.col(c) *= -1.0;
  }
}

}  // namespace

PcaModel fit_pca(std::span<const SparseVector> vectors, std::size_t n_features, std::size_t k,
                 const PcaOptions& options) {
  if (vectors.empty()) throw std::invalid_argument("fit_pca: no input vectors");
  if (k == 0) throw std::invalid_argument("fit_pca: k must be >= 1");

  const std::size_t n = vectors.size();
  const std::size_t dim = n_features;
  const CsrMatrix x = CsrMatrix::from_rows(vectors, dim);
  const CsrMatrix xt = x.transposed();
  const auto V = static_cast<Eigen::Index>(dim);

  PcaModel model;
  model.mean = Eigen::VectorXd::Zero(V);
  for (std::size_t t = 0; t < dim; ++t) {
    double s = 0.0;
    for (std::size_t p = xt.row_ptr[t]; p < xt.row_ptr[t + 1]; ++p) s += xt.values[p];
    model.mean[static_cast<Eigen::Index>(t)] = s / static_cast<double>(n);
  }

  const std::size_t kept = std::min({k, dim, n});
  if (kept == 0) {
    model.components.resize(0, V);
    model.explained_variance.resize(0);
    return model;
  }

  const std::size_t rank_bound = std::min(n, dim);
  const std::size_t width = std::min(kept + static_cast<std::size_t>(std::max(options.oversample, 0)), rank_bound);

  Eigen::MatrixXd basis;     // V x kept
  Eigen::VectorXd singular;  // >= kept
  if (width >= rank_bound) {
    Eigen::MatrixXd centered = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), V);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t p = x.row_ptr[i]; p < x.row_ptr[i + 1]; ++p) {
        centered(static_cast<Eigen::Index>(i), x.col_idx[p]) = x.values[p];
      }
    }
    centered.rowwise() -= model.mean.transpose();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    basis = svd.matrixV().leftCols(static_cast<Eigen::Index>(kept));
    singular = svd.singularValues();
  } else {
    const auto l = static_cast<Eigen::Index>(width);
    // X_c * b without forming X_c.
    auto apply = [&](const Eigen::MatrixXd& b) {
      Eigen::MatrixXd y = kernels::spmm(x, b);
      const Eigen::RowVectorXd shift = model.mean.transpose() * b;
      y.rowwise() -= shift;
      return y;
    };
    // X_c^T * q.
    auto apply_transposed = [&](const Eigen::MatrixXd& q) {
      Eigen::MatrixXd z = kernels::spmm(xt, q);
      const Eigen::RowVectorXd colsum = q.colwise().sum();
      z.noalias() -= model.mean * colsum;
      return z;
    };

    SplitMix64 rng(options.seed);
    Eigen::MatrixXd omega(V, l);
    for (Eigen::Index c = 0; c < l; ++c) {
      for (Eigen::Index r = 0; r < V; ++r) omega(r, c) = (rng.next() >> 63) ? 1.0 : -1.0;
    }
    Eigen::MatrixXd q = orthonormal_basis(apply(omega));
    for (int it = 0; it < options.power_iterations; ++it) {
      q = orthonormal_basis(apply(orthonormal_basis(apply_transposed(q))));
    }
    const Eigen::MatrixXd bt = apply_transposed(q);  // (Q^T X_c)^T
    Eigen::BDCSVD<Eigen::MatrixXd> svd(bt, Eigen::ComputeThinU);
    basis = svd.matrixU().leftCols(static_cast<Eigen::Index>(kept));
    singular = svd.singularValues();
  }

  canonicalize_signs(basis);
  model.components = basis.transpose();
  const double denom = static_cast<double>(std::max<std::size_t>(n, 2) - 1);
  model.explained_variance = singular.head(static_cast<Eigen::Index>(kept)).array().square() / denom;
  return model;
}

DenseVector project(const PcaModel& model, const SparseVector& v) {
  const auto dim = model.dimension();
  for (auto idx : v.indices) {
    if (idx >= dim) {
      throw std::invalid_argument("project: index " + std::to_string(idx) + " outside model dimension " +
                                  std::to_string(dim));
    }
  }
  const auto k = static_cast<Eigen::Index>(model.k());
  DenseVector out(static_cast<std::size_t>(k), 0.0);
  const Eigen::VectorXd shift = model.components * model.mean;
  for (std::size_t p = 0; p < v.nnz(); ++p) {
    const auto col = model.components.col(v.indices[p]);
    for (Eigen::Index j = 0; j < k; ++j) out[j] += v.weights[p] * col[j];
  }
  for (Eigen::Index j = 0; j < k; ++j) out[j] -= shift[j];
  return out;
}

RowMatrix project_all(const PcaModel& model, std::span<const SparseVector> vectors) {
  const CsrMatrix x = CsrMatrix::from_rows(vectors, model.dimension());
  const Eigen::VectorXd shift = model.components * model.mean;
  return kernels::project_rows(x, model.components, shift);
}

Eigen::VectorXd reconstruct(const PcaModel& model, std::span<const double> scores) {
  if (scores.size() != model.k()) throw std::invalid_argument("reconstruct: score length mismatch");
  const Eigen::Map<const Eigen::VectorXd> s(scores.data(), static_cast<Eigen::Index>(scores.size()));
  return model.mean + model.components.transpose() * s;
}

}  // namespace qrelx
