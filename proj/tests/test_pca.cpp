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

#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "qrelx/pca.hpp"
#include "qrelx/vector_io.hpp"

using namespace qrelx;

namespace {

SparseVector dense_row(std::initializer_list<double> xs) {
  SparseVector v;
  std::uint32_t i = 0;
  for (double x : xs) {
    if (x != 0.0) {
      v.indices.push_back(i);
      v.weights.push_back(x);
    }
    ++i;
  }
  return v;
}

}  // namespace

TEST_CASE("collinear points give one non-zero component") {
  std::vector<SparseVector> pts{dense_row({1, 2}), dense_row({2, 4}), dense_row({3, 6})};
  const auto m = fit_pca(pts, 2, 2);
  REQUIRE(m.k() == 2);
  CHECK(m.explained_variance[0] > 0.0);
  CHECK(std::abs(m.explained_variance[1]) < 1e-8);
  // variance along the line: points at distance sqrt(5) apart
  CHECK(m.explained_variance[0] == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("k is capped by V and n") {
  SplitMix64 rng(2);
  auto rows = oracle::random_sparse(5, 4, 0.8, rng);
  CHECK(fit_pca(rows, 4, 200).k() == 4);
  auto wide = oracle::random_sparse(3, 10, 0.8, rng);
  CHECK(fit_pca(wide, 10, 200).k() == 3);
  CHECK_THROWS_AS(fit_pca({}, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(fit_pca(rows, 4, 0), std::invalid_argument);
}

TEST_CASE("random 20x10 input: orthonormal components") {
  SplitMix64 rng(20);
  auto rows = oracle::random_sparse(20, 10, 0.7, rng);
  const auto m = fit_pca(rows, 10, 10);
  const auto e = oracle::compare_pca(m, rows, 10);
  CHECK(e.orthonormality < 1e-8);
  CHECK(e.variance_ordered);
  CHECK(e.projection < 1e-6);
  CHECK(e.variance < 1e-9);
  CHECK(e.reconstruction < 1e-6);
  CHECK(e.total_variance < 1e-6);
}

TEST_CASE("projecting the mean gives zero") {
  SplitMix64 rng(4);
  auto rows = oracle::random_sparse(12, 6, 0.9, rng);
  const auto m = fit_pca(rows, 6, 3);
  SparseVector mean;
  for (std::uint32_t i = 0; i < 6; ++i) {
    if (m.mean[i] != 0.0) {
      mean.indices.push_back(i);
      mean.weights.push_back(m.mean[i]);
    }
  }
  for (double x : project(m, mean)) CHECK(std::abs(x) < 1e-12);
}

TEST_CASE("full basis preserves pairwise distances") {
  SplitMix64 rng(6);
  auto rows = oracle::random_sparse(15, 5, 0.8, rng);
  const auto m = fit_pca(rows, 5, 5);
  const auto x = oracle::densify(rows, 5);
  const auto p = project_all(m, rows);
  for (int i = 0; i < 15; ++i) {
    for (int j = i + 1; j < 15; ++j) {
      const double a = (x.row(i) - x.row(j)).norm();
      const double b = (p.row(i) - p.row(j)).norm();
      CHECK(std::abs(a - b) < 1e-6);
    }
  }
}

TEST_CASE("project and project_all agree; dimension errors") {
  SplitMix64 rng(8);
  auto rows = oracle::random_sparse(25, 12, 0.5, rng);
  const auto m = fit_pca(rows, 12, 4);
  const auto all = project_all(m, rows);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto one = project(m, rows[i]);
    for (std::size_t j = 0; j < one.size(); ++j) CHECK(std::abs(one[j] - all(i, j)) < 1e-12);
  }
  SparseVector bad;
  bad.indices = {12};
  bad.weights = {1.0};
  CHECK_THROWS_AS(project(m, bad), std::invalid_argument);
  std::vector<double> short_scores(2);
  CHECK_THROWS_AS(reconstruct(m, short_scores), std::invalid_argument);
}

TEST_CASE("sign convention: largest-magnitude coordinate positive") {
  SplitMix64 rng(10);
  auto rows = oracle::random_sparse(30, 8, 0.6, rng);
  const auto m = fit_pca(rows, 8, 5);
  for (Eigen::Index i = 0; i < m.components.rows(); ++i) {
    Eigen::Index best = 0;
    m.components.row(i).cwiseAbs().maxCoeff(&best);
    CHECK(m.components(i, best) > 0.0);
  }
}

TEST_CASE("randomized path recovers exact low-rank data") {
  // rank-3 data, n=300, V=120, k=3: far below the exact-path threshold
  SplitMix64 rng(12);
  const std::size_t n = 300, dim = 120;
  Eigen::MatrixXd basis(3, dim);
  for (Eigen::Index i = 0; i < basis.size(); ++i) basis.data()[i] = rng.uniform() - 0.5;
  std::vector<SparseVector> rows(n);
  for (auto& r : rows) {
    Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(dim);
    for (int j = 0; j < 3; ++j) x += (rng.uniform() * 4 - 2) * basis.row(j);
    for (std::size_t c = 0; c < dim; ++c) {
      r.indices.push_back(static_cast<std::uint32_t>(c));
      r.weights.push_back(x[static_cast<Eigen::Index>(c)]);
    }
  }
  const auto m = fit_pca(rows, dim, 3);
  const auto e = oracle::compare_pca(m, rows, dim);
  CHECK(e.orthonormality < 1e-8);
  CHECK(e.variance_ordered);
  CHECK(e.reconstruction < 1e-6);
  CHECK(e.projection < 1e-6);
  CHECK(e.variance < 1e-8);
}

TEST_CASE("randomized path approximates the top components of sparse data") {
  SplitMix64 rng(14);
  auto rows = oracle::random_sparse(200, 150, 0.05, rng);
  // strong leading directions
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& r = rows[i];
    const double a = rng.uniform() * 6 - 3;
    for (std::uint32_t c = 0; c < 150; c += 37) {
      auto it = std::lower_bound(r.indices.begin(), r.indices.end(), c);
      const auto pos = static_cast<std::size_t>(it - r.indices.begin());
      if (it != r.indices.end() && *it == c) {
        r.weights[pos] += a;
      } else {
        r.indices.insert(it, c);
        r.weights.insert(r.weights.begin() + static_cast<std::ptrdiff_t>(pos), a);
      }
    }
  }
  const auto m = fit_pca(rows, 150, 2);
  const auto e = oracle::compare_pca(m, rows, 150);
  CHECK(e.orthonormality < 1e-8);
  CHECK(e.variance_ordered);
  const auto o = oracle::dense_pca(oracle::densify(rows, 150));
  CHECK(m.explained_variance[0] == doctest::Approx(o.eigenvalues[0]).epsilon(1e-6));
}

TEST_CASE("fit is deterministic") {
  SplitMix64 rng(16);
  auto rows = oracle::random_sparse(100, 80, 0.1, rng);
  const auto a = fit_pca(rows, 80, 5);
  const auto b = fit_pca(rows, 80, 5);
  CHECK(a.components == b.components);
  CHECK(a.explained_variance == b.explained_variance);
}

TEST_CASE("PCA model binary round trip") {
  SplitMix64 rng(18);
  auto rows = oracle::random_sparse(20, 9, 0.6, rng);
  const auto m = fit_pca(rows, 9, 4);
  std::stringstream buf;
  save_pca(buf, m);
  CHECK(buf.str().substr(0, 4) == "QXV1");
  const auto back = load_pca(buf);
  CHECK(back.mean == m.mean);
  CHECK(back.components == m.components);
  CHECK(back.explained_variance == m.explained_variance);

  std::stringstream junk("NOPE....");
  CHECK_THROWS(load_pca(junk));
}
